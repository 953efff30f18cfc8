# generate_examples.py
"""Write the example categories and representations under data/.

Usage:
    python scripts/generate_examples.py [--out data]
"""
import sys
from pathlib import Path

import click

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from services.based_cat import build_cartan_category, build_group_category, build_scalar_category  # noqa: E402
from services.groups import symmetric  # noqa: E402
from services.soergel import build_dihedral_soergel  # noqa: E402
from storage.json_store import JsonStore  # noqa: E402


EXOTIC_REP = {
    "category": "exotic.json",
    "ind_objects": {"i": ["X1", "X2"]},
    "matrices": {"1": [[1, 0], [0, 1]], "F": [[1, 1], [1, 1]]},
}


@click.command()
@click.option("--out", default="data", show_default=True, help="Target directory.")
def main(out: str):
    store = JsonStore(out)
    documents = {
        "exotic.json": build_scalar_category(2).to_dict(),
        "exotic_rep.json": EXOTIC_REP,
        "dual_numbers.json": build_cartan_category([[2]], [1]).to_dict(),
        "symmetric_two.json": build_cartan_category([[2, 1], [1, 2]], [1, 2]).to_dict(),
        "b2.json": build_dihedral_soergel(4).to_dict(),
        "s3.json": build_group_category(symmetric(3)).to_dict(),
    }
    for name, document in documents.items():
        path = store.save_json(name, document)
        click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
