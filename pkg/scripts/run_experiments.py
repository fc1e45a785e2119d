"""Run every example manifest in configs/ through the CLI, one output directory each."""
import argparse
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
# manifest -> subcommand; the blow-up manifest is expected to exit with code 3
PLAN = [
    ("symmetric.toml", "riemann"),
    ("symmetric.toml", "approx-wave"),
    ("decay.toml", "verify-decay"),
    ("convergence.toml", "convergence"),
    ("convergence.toml", "compare-limit"),
    ("stability.toml", "simulate"),
    ("blowup.toml", "simulate"),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(ROOT / "out"))
    args = parser.parse_args()
    for manifest, sub in PLAN:
        target = Path(args.out) / f"{Path(manifest).stem}-{sub}"
        cmd = [sys.executable, "-m", "rarewave.cli", sub, "--config", str(ROOT / "configs" / manifest), "--out", str(target)]
        print(f"$ rarewave {sub} --config configs/{manifest} --out {target}", flush=True)
        code = subprocess.call(cmd)
        print(f"  exit code {code}\n", flush=True)


if __name__ == "__main__":
    main()
