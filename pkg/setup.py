"""
Setup script to check the bundled multi-mode systems
"""
import sys
import os
import glob

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config.settings import setup_logging
from src.analysis.condition import check_system, is_valid_protocol
from src.documents.reports import reports_table
from src.documents.system_doc import parse_system
from src.errors import ModeChangeError


def main() -> int:
    print("=" * 80)
    print("🚀 MODE TRANSITION TOOLKIT SETUP")
    print("=" * 80)
    setup_logging()

    print("\n1️⃣ Locating bundled systems...")
    data_dir = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", "systems")
    paths = sorted(glob.glob(os.path.join(data_dir, "*.json")))
    if not paths:
        print(f"❌ No system documents under {data_dir}")
        return 1
    print(f"✅ Found {len(paths)} system(s)")

    print("\n2️⃣ Parsing and validating...")
    systems = {}
    for path in paths:
        name = os.path.basename(path)
        try:
            systems[name] = parse_system(path)
            print(f"   ✅ {name}")
        except ModeChangeError as e:
            print(f"   ❌ {name}: {e}")
    if len(systems) != len(paths):
        return 2

    print("\n3️⃣ Checking the transition condition...")
    valid = 0
    for name, system in systems.items():
        reports = check_system(system)
        print(f"\n📐 {name} (m={system.processors})")
        print(reports_table(reports))
        valid += is_valid_protocol(reports)

    print("\n" + "=" * 80)
    print("✨ SETUP COMPLETE!")
    print("=" * 80)
    print(f"\n📊 Summary:")
    print(f"   • Systems parsed: {len(systems)}")
    print(f"   • Valid protocols: {valid}/{len(systems)}")
    print(f"\n🎉 Try a transition:")
    print(f"   python src/app.py transition data/systems/two_cpu_transition.json --from normal --to degraded --gantt")
    print(f"\n   Or a validation campaign:")
    print(f"   python src/app.py validate bound --trials 200 --seed 42")
    print("=" * 80 + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
