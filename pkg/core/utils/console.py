"""
Shared rich console for status output.
Status goes to stderr so reports written to stdout stay machine readable.
"""
from rich.console import Console

console = Console(stderr=True, highlight=False)


def warn(message: str) -> None:
    """Print a warning regardless of verbosity."""
    console.print(f"⚠️  {message}", style="yellow")
