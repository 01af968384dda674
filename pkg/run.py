# run.py
# Entry point for the command-line application: python run.py <subcommand> [options]
import sys

from src.cli.main import run

if __name__ == '__main__':
    sys.exit(run(sys.argv[1:]))
