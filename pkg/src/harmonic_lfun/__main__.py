"""Allow running as python -m harmonic_lfun."""

from harmonic_lfun.cli import app

if __name__ == "__main__":
    app()
