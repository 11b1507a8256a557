#!/usr/bin/python

import sys
import typer
import logging
import subprocess

from pathlib import Path
from rich.logging import RichHandler
from rich.console import Console

# Init console
console = Console()

# Init cli
cli = typer.Typer()

# Configure logging
logging.basicConfig(
    level=logging.DEBUG,
    format="%(message)s",
    datefmt="[%X]",
    handlers=[RichHandler(show_time=False)]
)

log = logging.getLogger("rich")

# Get the script directory
script_dir = Path(__file__).parent

# Construct the docs path
docs_path = script_dir.parent / "gtcodec/docs"


def install_libs_packages() -> None:
    """Installs the sphinx packages"""
    command_process = subprocess.run(
        [sys.executable, "-m", "pip", "install", "sphinx", "sphinx-autobuild", "sphinx-book-theme"],
        stderr=subprocess.PIPE,
        stdout=subprocess.PIPE,
    )

    if command_process.returncode != 0:
        log.error(
            f"the following error raised when installing packages:\n{command_process.stderr.decode()}"
        )
        sys.exit(1)


def build_docs(docs_path: Path, retry: bool = True) -> bool:
    """Builds the html docs into `_build/html`"""
    try:
        command_process = subprocess.run(
            ["sphinx-build", "-M", "html", ".", "_build"],
            cwd=docs_path,
            stderr=subprocess.PIPE,
            stdout=subprocess.PIPE,
        )
    except FileNotFoundError:
        if not retry:
            log.error("`sphinx-build` is still missing after install")
            return False

        log.error(
            "`sphinx-build` is not installed. Installing..."
        )

        install_libs_packages()  # May exit due to errors while installing

        return build_docs(docs_path=docs_path, retry=False)

    if command_process.returncode != 0:
        log.error(
            f"sphinx-build failed:\n{command_process.stderr.decode()}"
        )
        return False

    return True


@cli.command()
def build() -> None:
    """Builds docs"""

    with console.status("Building docs...") as _:
        built = build_docs(docs_path=docs_path)

    if not built:
        raise typer.Exit(code=1)

    log.info(
        f"Docs built in: '{docs_path}/_build/html'"
    )


@cli.command()
def serve(
        host: str = typer.Option("0.0.0.0", "--host", help="The host"),
        port: int = typer.Option(9000, "--port", help="The port")
    ) -> None:
    """Serves the docs with live reload"""
    command = ["sphinx-autobuild", ".", "_build", "--host", host, "--port", str(port)]

    try:
        subprocess.run(command, cwd=docs_path)
    except KeyboardInterrupt:
        exit(0)


if __name__ == "__main__":
    cli()
