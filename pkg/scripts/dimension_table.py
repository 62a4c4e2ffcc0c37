"""
Print the dimensions of all fundamental modules next to the values
predicted by their closed branching rules
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from app.cli import expected_dimension
from app.services.cartan import supported_types
from app.services.qchar_engine import kr_poly
from app.services.symalg import SpectralParam


def dimension_table(max_rank: int = 3):
    """Yield (type, node, dimension, expected) rows"""
    for t in supported_types(max_rank):
        for i in t.nodes:
            dimension = kr_poly(t, i, 1, SpectralParam()).dimension
            yield t.name, i, dimension, expected_dimension(t, i)


if __name__ == "__main__":
    max_rank = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    print(f"\n🔍 Fundamental dimensions up to rank {max_rank}\n")
    mismatches = 0
    for name, node, dimension, expected in dimension_table(max_rank):
        mark = "✅" if expected in (None, dimension) else "❌"
        mismatches += mark == "❌"
        suffix = "" if expected is None else f" (expected {expected})"
        print(f"   {mark} {name:>8} node {node}: {dimension}{suffix}")
    print(f"\n📊 {mismatches} mismatches")
    sys.exit(1 if mismatches else 0)
