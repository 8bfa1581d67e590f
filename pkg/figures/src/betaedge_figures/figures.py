"""Panel layouts for the four overview figures.

Each figure consumes betaedge CSV artifacts, validates their metadata
against the figure's declared parameters, and renders with fixed styling
(no timestamps, fixed size) so output bytes are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .csvio import Artifact, MetadataMismatch, MissingInput, read_artifact, require

BLUE_SOLID = dict(color="tab:blue", linestyle="-", linewidth=1.2)
RED_DASHED = dict(color="tab:red", linestyle="--", linewidth=1.2)

_ENSEMBLE_LABEL = {
    "gaussian": "Gaussian",
    "laguerre": "Laguerre (fixed $a$)",
    "laguerre-proportional": r"Laguerre ($a = \alpha N$)",
}


@dataclass
class FigureSpec:
    """One figure: its id, required inputs, and validation parameters."""

    figure_id: int
    ensemble: str
    beta: int
    density_ns: tuple = ()          # left panel: density CSVs at these N
    pair_columns: tuple = ()        # right panel: dev_* columns, in order
    correction_ns: tuple = ()       # N sweep expected in the correction CSV
    derivcheck: tuple = field(default_factory=tuple)  # fig 4: (ensemble, N) panels


def _density_left(spec: FigureSpec, ax, artifacts: dict[int, Artifact]) -> None:
    styles = (BLUE_SOLID, RED_DASHED)
    for N, style in zip(spec.density_ns, styles):
        art = artifacts[N]
        ax.plot(art.column("x"), art.column("density"),
                label=f"$N = {N}$", **style)
    ax.set_xlabel("$x$")
    ax.set_ylabel("scaled density")
    ax.legend(frameon=False)


def _pairs_right(spec: FigureSpec, ax, art: Artifact) -> None:
    styles = (BLUE_SOLID, RED_DASHED)
    for col, style in zip(spec.pair_columns, styles):
        n1, n2 = col.split("_")[1:]
        ax.plot(art.column("x"), art.column(col),
                label=f"$(N_1, N_2) = ({n1}, {n2})$", **style)
    ax.set_xlabel("$x$")
    ax.set_ylabel("successive difference")
    ax.legend(frameon=False)


def _classify(paths) -> list[Artifact]:
    return [read_artifact(p) for p in paths]


def _pick(artifacts: list[Artifact], command: str, **meta) -> Artifact:
    matches = [a for a in artifacts
               if a.meta.get("command") == command
               and all(a.meta.get(k) == v for k, v in meta.items())]
    if not matches:
        wanted = {"command": command, **meta}
        raise MetadataMismatch(
            f"no input matches {wanted}; inputs: "
            + ", ".join(str(a.path) for a in artifacts))
    return matches[0]


def _render_density_figure(spec: FigureSpec, inputs, out: Path) -> Path:
    artifacts = _classify(inputs)
    dens = {}
    for N in spec.density_ns:
        art = _pick(artifacts, "density", ensemble=spec.ensemble, N=N)
        require(art, beta=spec.beta)
        dens[N] = art
    corr = _pick(artifacts, "correction", ensemble=spec.ensemble)
    require(corr, beta=spec.beta, N_values=list(spec.correction_ns))
    fig, (axl, axr) = plt.subplots(1, 2, figsize=(10, 4))
    _density_left(spec, axl, dens)
    _pairs_right(spec, axr, corr)
    fig.suptitle(f"{_ENSEMBLE_LABEL[spec.ensemble]}, $\\beta = {spec.beta}$")
    fig.tight_layout()
    fig.savefig(out, dpi=150, metadata={"Software": "betaedge-figures"})
    plt.close(fig)
    return out


def _render_derivcheck_figure(spec: FigureSpec, inputs, out: Path) -> Path:
    artifacts = _classify(inputs)
    panels = []
    for ensemble, N in spec.derivcheck:
        art = _pick(artifacts, "derivcheck", ensemble=ensemble, N=N)
        require(art, beta=spec.beta)
        panels.append((ensemble, art))
    fig, axes = plt.subplots(1, len(panels), figsize=(5 * len(panels), 4))
    if len(panels) == 1:
        axes = [axes]
    for ax, (ensemble, art) in zip(axes, panels):
        ax.plot(art.column("x"), art.column("f2"),
                label="correction diagnostic", **BLUE_SOLID)
        ax.plot(art.column("x"), art.column("neg_deriv"),
                label="$-$scaled derivative", **RED_DASHED)
        ax.set_title(_ENSEMBLE_LABEL[ensemble])
        ax.set_xlabel("$x$")
        ax.legend(frameon=False)
    fig.suptitle(f"$N^{{-1/3}}$ correction vs density derivative, "
                 f"$\\beta = {spec.beta}$")
    fig.tight_layout()
    fig.savefig(out, dpi=150, metadata={"Software": "betaedge-figures"})
    plt.close(fig)
    return out


FIGURES: dict[int, FigureSpec] = {
    1: FigureSpec(1, "gaussian", 6, density_ns=(30, 40),
                  pair_columns=("dev_30_40", "dev_40_50"),
                  correction_ns=(30, 40, 50)),
    2: FigureSpec(2, "laguerre", 6, density_ns=(40, 50),
                  pair_columns=("dev_40_50", "dev_50_60"),
                  correction_ns=(40, 50, 60)),
    3: FigureSpec(3, "laguerre-proportional", 6, density_ns=(40, 50),
                  pair_columns=("dev_40_50", "dev_50_60"),
                  correction_ns=(40, 50, 60)),
    4: FigureSpec(4, "", 6, derivcheck=(("gaussian", 30), ("laguerre", 30),
                                        ("laguerre-proportional", 30))),
}


def render(figure_id: int, inputs, out) -> Path:
    """Render figure `figure_id` from artifact paths `inputs` to `out`."""
    if figure_id not in FIGURES:
        raise MissingInput(f"unknown figure id {figure_id}; choose 1-4")
    spec = FIGURES[figure_id]
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if spec.derivcheck:
        return _render_derivcheck_figure(spec, inputs, out)
    return _render_density_figure(spec, inputs, out)
