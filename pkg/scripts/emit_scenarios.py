"""Write every bundled scenario out as a JSON file.

The emitted files follow the same schema the loader accepts, so they serve
as templates for new scenarios; point IDEALBENCH_SCENARIOS at the output
directory to resolve names from it.

Usage: python scripts/emit_scenarios.py [OUT_DIR]
"""

import os
import sys

from idealbench.scenarios import bundled_names, load_scenario
from idealbench.serialize import dump_json


def main() -> int:
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "scenarios"
    os.makedirs(out_dir, exist_ok=True)
    for name in bundled_names():
        dump_json(os.path.join(out_dir, f"{name}.json"), load_scenario(name).to_json())
        print(f"wrote {out_dir}/{name}.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
