import sys

import click

from .csvio import MetadataMismatch, MissingInput
from .figures import FIGURES, render as render_figure


@click.group()
def main() -> None:
    """Render overview figures from betaedge CSV artifacts."""


@main.command("render")
@click.option("--figure", "figure_id", type=click.IntRange(1, 4), required=True)
@click.option("--inputs", multiple=True, required=True,
              type=click.Path(), help="artifact CSV path (repeatable)")
@click.option("--out", type=click.Path(), required=True, help="output image path")
def render(figure_id, inputs, out):
    """Render one figure from its input CSVs."""
    try:
        path = render_figure(figure_id, inputs, out)
        click.echo(str(path))
    except MetadataMismatch as exc:
        click.echo(f"error: metadata mismatch: {exc}", err=True)
        sys.exit(2)
    except MissingInput as exc:
        click.echo(f"error: missing input: {exc}", err=True)
        sys.exit(3)


@main.command("list")
def list_figures():
    """Describe the available figures and their expected inputs."""
    for fid, spec in FIGURES.items():
        if spec.derivcheck:
            need = ", ".join(f"derivcheck {ens} N={N}" for ens, N in spec.derivcheck)
        else:
            need = (", ".join(f"density {spec.ensemble} N={N}"
                              for N in spec.density_ns)
                    + f", correction {spec.ensemble} N={list(spec.correction_ns)}")
        click.echo(f"figure {fid}: beta={spec.beta}; needs {need}")
