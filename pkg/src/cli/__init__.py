# src/cli/__init__.py
# Command-line layer: error types, subcommand registry and the run(argv) entry point (src.cli.main).
