"""Command line entry points: serve the API, batch-analyze, make fixtures.

Exit codes: 0 success, 1 runtime failure (bad data, missing files),
2 usage error (argparse's own convention).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .clustering import kmeans
from .composition import clr_inv
from .dataset import generate_synthetic, load_dataset, write_dataset
from .embedding import pca_fit, pca_project
from .errors import AitchviewError
from .geometry import HalfPlane

#: two vertical bands of a 500x500 image, 2,500 spots, six cell types,
#: one dominant type per band
TWO_REGIONS = {
    "width": 500,
    "height": 500,
    "grid_step": 10,
    "regions": [
        (HalfPlane(1.0, 0.0, 249.5), [50.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
        (HalfPlane(-1.0, 0.0, -249.5), [1.0, 1.0, 1.0, 1.0, 1.0, 50.0]),
    ],
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aitchview",
        description="Interactive analytics for spot-level cell-type proportions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP + WebSocket server")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument(
        "--data-dir",
        default=os.environ.get("AITCHVIEW_DATA_DIR"),
        help="directory resolving relative manifest paths "
        "(default: AITCHVIEW_DATA_DIR)",
    )
    serve.add_argument("--ui-dir", default=None, help="built UI bundle to serve at /")

    analyze = sub.add_parser("analyze", help="run CLR + PCA + k-means headlessly")
    analyze.add_argument("--manifest", required=True)
    analyze.add_argument("--k", type=int, required=True)
    analyze.add_argument("--seed", type=int, default=0)
    analyze.add_argument("--out", required=True, help="output JSON path")

    generate = sub.add_parser("generate", help="write a synthetic fixture dataset")
    generate.add_argument("--preset", choices=["two-regions"], default="two-regions")
    generate.add_argument("--out", required=True, help="output directory")
    generate.add_argument("--seed", type=int, default=0)

    return parser


def _serve(args) -> int:
    import uvicorn

    from .server import create_app

    ui_dir = args.ui_dir
    if ui_dir is not None:
        # resolve now so a later cwd change cannot silently unmount the UI
        ui_dir = Path(ui_dir).resolve()
        if not ui_dir.is_dir():
            raise NotADirectoryError(f"--ui-dir {args.ui_dir!r} is not a directory")
    app = create_app(data_dir=args.data_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _analyze(args) -> int:
    dataset = load_dataset(args.manifest)
    z = dataset.clr_matrix()
    model = pca_fit(z)
    embedding = pca_project(model, z)
    clustering = kmeans(z, args.k, seed=args.seed)
    doc = {
        "cell_types": list(dataset.cell_types),
        "spot_ids": [s.id for s in dataset.spots],
        "clr": z.tolist(),
        "embedding": {
            "coords": embedding.coords.tolist(),
            "explained_variance": model.explained_variance.tolist(),
            "pc1_order": embedding.pc1_order.tolist(),
        },
        "clustering": {
            "k": clustering.k,
            "seed": clustering.seed,
            "labels": clustering.labels.tolist(),
            "centroids": clr_inv(clustering.centroids).tolist(),
            "inertia": float(clustering.inertia),
            "iterations": clustering.iterations,
        },
    }
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc, indent=2) + "\n")
    return 0


def _generate(args) -> int:
    preset = TWO_REGIONS
    dataset, truth = generate_synthetic(
        width=preset["width"],
        height=preset["height"],
        grid_step=preset["grid_step"],
        regions=preset["regions"],
        seed=args.seed,
    )
    manifest_path = write_dataset(dataset, args.out)
    truth_doc = {
        "region_labels": truth.region_labels.tolist(),
        "region_params": [list(params) for params in truth.region_params],
        "seed": args.seed,
    }
    truth_path = Path(args.out) / "ground_truth.json"
    truth_path.write_text(json.dumps(truth_doc, indent=2) + "\n")
    print(manifest_path)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"serve": _serve, "analyze": _analyze, "generate": _generate}
    try:
        return handler[args.command](args)
    except AitchviewError as exc:
        print(f"aitchview: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"aitchview: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
