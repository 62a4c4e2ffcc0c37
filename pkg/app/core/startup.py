"""
Startup self-check for the q-character service
Runs a few small characters whose values are known in closed form
"""
from typing import Any, Dict

from app.core.errors import QCharError
from app.services.cartan import parse_type
from app.services.qchar_engine import Engine, check_tsystem, kr_char


def check_a2_square() -> bool:
    """W^{(0)}_2 of A2^(2) has six monomials"""
    report = kr_char(parse_type("A2-2"), 0, 2)
    return report.distinct_monomials == 6 and report.dimension == 6


def check_a4_fundamental() -> bool:
    """The node-1 fundamental of A4^(2) has five monomials"""
    report = kr_char(parse_type("A4-2"), 1, 1, engine=Engine.FOLD)
    return report.dimension == 5


def check_d4_tsystem() -> bool:
    return check_tsystem(parse_type("D4-3"), 2, 1).ok


PHASES = [
    ("A2^(2) square", check_a2_square),
    ("A4^(2) fundamental", check_a4_fundamental),
    ("D4^(3) T-system", check_d4_tsystem),
]


def self_check() -> Dict[str, Any]:
    """Run every phase; a phase that raises counts as failed"""
    print("\n" + "=" * 70)
    print("🚀 STARTING Q-CHARACTER SELF-CHECK")
    print("=" * 70 + "\n")

    results: Dict[str, bool] = {}
    for idx, (name, phase) in enumerate(PHASES, start=1):
        print(f"🔧 Phase {idx}: {name}...")
        try:
            ok = phase()
        except QCharError as e:
            print(f"   ❌ {e.__class__.__name__}: {e.message}")
            ok = False
        print(f"   {'✅' if ok else '❌'} {name}")
        results[name] = ok

    passed = sum(results.values())
    print(f"\n📊 {passed}/{len(results)} phases passed\n")
    return {"ok": passed == len(results), "phases": results}
