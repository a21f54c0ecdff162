"""CLI: export --model X --pooling Y --in manifest.json --out fixture.jsonl

Exit codes: 0 success, 1 checkpoint/export failure, 2 usage error (including
an empty text list).
"""

from __future__ import annotations

import argparse
import sys

from .encoders import MODEL_FAMILIES, CheckpointUnavailable
from .export import ExportSpec, run_export
from .manifest import ManifestError, load_texts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embed-export",
        description="Generate embedding fixture files from pre-trained checkpoints",
    )
    parser.add_argument("--model", choices=sorted(MODEL_FAMILIES), required=True)
    parser.add_argument(
        "--pooling", choices=("mean_masked", "cls"), default="mean_masked",
        help="sentence pooling for token-level models (bert only)",
    )
    parser.add_argument("--in", dest="manifest", required=True, metavar="MANIFEST")
    parser.add_argument("--out", dest="output", required=True, metavar="FIXTURE")
    parser.add_argument("--records", choices=("all", "items", "labels"), default="all")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        pairs = load_texts(args.manifest, args.records)
    except (ManifestError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if not pairs:
        print("error: manifest contains no texts to embed", file=sys.stderr)
        return 2
    try:
        spec = ExportSpec(
            model=args.model,
            manifest_path=args.manifest,
            output_path=args.output,
            pooling=args.pooling,
            records=args.records,
        )
        header = run_export(spec)
    except CheckpointUnavailable as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ValueError, ManifestError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"wrote {args.output}: {len(pairs)} records, dim {header['dim']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
