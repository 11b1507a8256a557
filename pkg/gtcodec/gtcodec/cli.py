"""
Command line front end.

Statistics go to standard output as key=value pairs, logs to standard error.

Exit codes: 0 success, 1 I/O error, 2 bad configuration or arguments,
3 internal error, 4 malformed bitstream.


file: gtcodec/gtcodec/cli.py
"""

import logging

from collections import Counter
from contextlib import contextmanager
from pathlib import Path
from typing import (
    Iterator,
    Optional,
)

import orjson
import typer

# Models
from gtcodec.config import resolve_config
from gtcodec.learn.models import CodingMode

# Codec
from gtcodec.codec.image import (
    decode_image,
    encode_image,
    read_bitstream,
)
from gtcodec.codec.pgm import (
    read_image,
    write_pgm,
)

# Evaluation
from gtcodec.evaluation.metrics import psnr
from gtcodec.evaluation.studies import (
    correlation_of,
    parse_methods,
    parse_q_list,
    rate_model_study,
    sweep as run_sweep,
)
from gtcodec.evaluation.report import (
    SWEEP_HEADER,
    VALIDATE_HEADER,
    sweep_rows,
    validate_rows,
    write_csv,
)

# Errors
from gtcodec.errors import CodecError

# Logger
from gtcodec.logger import (
    enable_file_logging,
    logger,
    set_verbosity,
)

DEFAULT_QLIST = "3,5,8,12,20,30,40"

# Init cli
cli = typer.Typer(
    help="Block image codec with learned graph Fourier transforms.",
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)

# Shared options
ConfigOption = typer.Option(None, "--config", help="Flat key=value configuration file.")
QOption = typer.Option(None, "--q", help="Coefficient quantization step.")
ModeOption = typer.Option(None, "--mode", help="Coding mode.")
ThreadsOption = typer.Option(None, "--threads", help="Worker processes for block analysis (0 = one per CPU).")


@contextmanager
def exit_codes() -> Iterator[None]:
    """Map codec and I/O errors to process exit codes."""
    try:
        yield
    except CodecError as error:
        logger.error(f"{type(error).__name__}: {error}")
        raise typer.Exit(code=error.exit_code)
    except OSError as error:
        logger.error(f"I/O error: {error}")
        raise typer.Exit(code=1)
    except typer.Exit:
        raise
    except Exception as error:
        logger.exception(f"Internal error: {error}")
        raise typer.Exit(code=3)


def _format(value: float) -> str:
    return "inf" if value == float("inf") else f"{value:.4f}"


@cli.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log debug messages."),
    log_file: Optional[Path] = typer.Option(None, "--log-file", help="Also write JSON logs to this file."),
) -> None:
    set_verbosity(logging.DEBUG if verbose else logging.INFO)
    if log_file is not None:
        with exit_codes():
            enable_file_logging(str(log_file))


@cli.command()
def encode(
    input_path: Path = typer.Argument(..., help="8-bit grayscale image (PGM or PNG)."),
    output_path: Path = typer.Argument(..., help="Bitstream to write."),
    q: Optional[float] = QOption,
    mode: Optional[CodingMode] = ModeOption,
    config: Optional[Path] = ConfigOption,
    threads: Optional[int] = ThreadsOption,
) -> None:
    """Encode an image; prints bpp and encoder-side PSNR."""
    with exit_codes():
        cfg = resolve_config(config, q=q, mode=mode, threads=threads)
        image = read_image(input_path)
        result = encode_image(image, cfg)
        output_path.write_bytes(result.bitstream)
        typer.echo(f"bpp={_format(result.bpp)} psnr={_format(psnr(image, result.reconstruction))}")


@cli.command()
def decode(
    input_path: Path = typer.Argument(..., help="Bitstream to read."),
    output_path: Path = typer.Argument(..., help="PGM image to write."),
    config: Optional[Path] = ConfigOption,
) -> None:
    """Decode a bitstream into a PGM image."""
    with exit_codes():
        cfg = resolve_config(config)
        image = decode_image(input_path.read_bytes(), cfg)
        write_pgm(output_path, image)


@cli.command()
def sweep(
    input_path: Path = typer.Argument(..., help="8-bit grayscale image."),
    output_path: Path = typer.Argument(..., help="CSV file to write."),
    methods: str = typer.Option("learned,dct", "--methods", help="Comma-separated methods: learned, gaussian, dct, klt."),
    qlist: str = typer.Option(DEFAULT_QLIST, "--qlist", help="Comma-separated quantization steps."),
    mode: Optional[CodingMode] = ModeOption,
    config: Optional[Path] = ConfigOption,
    threads: Optional[int] = ThreadsOption,
) -> None:
    """Rate-distortion sweep of one or more methods."""
    with exit_codes():
        cfg = resolve_config(config, mode=mode, threads=threads)
        chosen = parse_methods(methods)
        q_list = parse_q_list(qlist)
        image = read_image(input_path)

        curves = [(method, run_sweep(image, cfg, q_list, method)) for method in chosen]
        write_csv(output_path, SWEEP_HEADER, sweep_rows(input_path.name, curves))
        typer.echo(f"rows={sum(len(curve) for _, curve in curves)}")


@cli.command()
def validate(
    input_path: Path = typer.Argument(..., help="8-bit grayscale image."),
    output_path: Path = typer.Argument(..., help="CSV file to write."),
    qlist: str = typer.Option(DEFAULT_QLIST, "--qlist", help="Comma-separated quantization steps."),
    mode: Optional[CodingMode] = ModeOption,
    config: Optional[Path] = ConfigOption,
    threads: Optional[int] = ThreadsOption,
) -> None:
    """Compare the rate and distortion models with the coded results."""
    with exit_codes():
        cfg = resolve_config(config, mode=mode, threads=threads)
        q_list = parse_q_list(qlist)
        image = read_image(input_path)

        rows = rate_model_study(image, cfg, q_list)
        write_csv(output_path, VALIDATE_HEADER, validate_rows(input_path.name, rows))
        if len(rows) >= 2:
            typer.echo(f"rate_correlation={correlation_of(rows):.6f}")
        else:
            logger.warning("rate correlation needs at least two q values")


@cli.command()
def inspect(
    input_path: Path = typer.Argument(..., help="Bitstream to read."),
    config: Optional[Path] = ConfigOption,
    as_json: bool = typer.Option(False, "--json", help="Print one JSON object instead of key=value lines."),
) -> None:
    """Print the header and the per-block transform and delta statistics."""
    with exit_codes():
        cfg = resolve_config(config)
        header, blocks = read_bitstream(input_path.read_bytes(), cfg)

        flags = Counter("gft" if block.use_gft else "dct" for block in blocks)
        deltas = Counter(block.delta_index for block in blocks if block.use_gft)
        summary = {
            "width": header.width,
            "height": header.height,
            "block_side": header.block_side,
            "mode": str(header.mode),
            "q": header.q,
            "blocks": len(blocks),
            "flags": {"dct": flags["dct"], "gft": flags["gft"]},
            "delta_histogram": {str(index): deltas[index] for index in sorted(deltas)},
        }

        if as_json:
            typer.echo(orjson.dumps(summary, option=orjson.OPT_SORT_KEYS).decode())
            return

        for key in ("width", "height", "block_side", "mode", "q", "blocks"):
            typer.echo(f"{key}={summary[key]:g}" if key == "q" else f"{key}={summary[key]}")
        typer.echo(f"flag_dct={flags['dct']}")
        typer.echo(f"flag_gft={flags['gft']}")
        for index, count in summary["delta_histogram"].items():
            typer.echo(f"delta_{index}={count}")


if __name__ == "__main__":
    cli()
