"""Run the full verification campaign twice and confirm the reports agree.

    python scripts/run_campaign.py --seed 7 --trials 20 --out report.json
"""

import argparse
import json
import sys

from frechet_cert.campaign import SUITES, CampaignConfig, run_campaign, strip_timings


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--out")
    args = ap.parse_args()

    config = CampaignConfig(seed=args.seed, trials=args.trials)
    first = run_campaign(config)
    second = run_campaign(config)
    same = json.dumps(strip_timings(first)) == json.dumps(strip_timings(second))

    for frag in first["suites"]:
        t = first["timings"][frag["suite"]]
        print(f"{frag['suite']:<16} passed={frag['passed']:<5} failed={frag['failed']:<3} {t:6.2f}s")
    print(f"suites: {len(SUITES)}  total: {sum(first['timings'].values()):.2f}s  reproducible: {same}")

    if args.out:
        with open(args.out, "w") as fh:
            json.dump(first, fh, indent=2, sort_keys=True)
    sys.exit(0 if first["ok"] and same else 1)


if __name__ == "__main__":
    main()
