# app.py - tworep bootstrap
"""Thin bootstrap: `python app.py <subcommand> ...` runs the tworep CLI."""
import sys

from dotenv import load_dotenv

load_dotenv()

from cli.main import run  # noqa: E402


if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
