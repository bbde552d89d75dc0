#!/usr/bin/env python3
"""Generate the bundled synthetic Balkans panel.

The panel is NOT official WEF data. Headline GCI and Technology-index scores
per country and year were chosen by hand to resemble the public picture of
the region in 2001-2006; leaf indicators are then back-solved through the
default tree so that the engine reproduces those headline scores:

  * ICT survey leaves and raw hard-data leaves are drawn around each
    country's technology level (seeded RNG, rounded to 2 decimals);
  * IS = TTS is solved so that the non-core Technology index hits its target;
  * the public-institution and macroeconomic leaves are solved so that the
    non-core GCI hits its target.

Writes balkans-synthetic.csv, balkans-classes.csv and balkans-ranks-synthetic.csv
next to this script. Re-running is deterministic.
"""

from __future__ import annotations

import csv
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
YEARS = list(range(2001, 2007))

# Ten regional entities; CS is Serbia and Montenegro as a single entity.
GCI = {
    "SI": [4.62, 4.70, 4.75, 4.80, 4.59, 4.77],
    "GR": [4.28, 4.30, 4.37, 4.56, 4.26, 4.35],
    "HR": [3.80, 3.85, 3.90, 3.96, 3.83, 4.02],
    "TR": [3.70, 3.66, 3.72, 3.82, 3.62, 3.99],
    "BG": [3.60, 3.65, 3.82, 3.90, 3.78, 3.93],
    "RO": [3.68, 3.70, 3.73, 3.86, 3.65, 3.96],
    "CS": [3.50, 3.48, 3.66, 3.75, 3.60, 3.88],
    "MK": [3.45, 3.40, 3.63, 3.69, 3.58, 3.84],
    "BA": [3.20, 3.25, 3.30, 3.38, 3.30, 3.45],
    "AL": [3.10, 3.15, 3.20, 3.28, 3.22, 3.35],
}

# Technology index: offset from GCI, except for MK which has its own series.
TI_OFFSET = {"SI": 0.30, "GR": 0.10, "HR": 0.00, "TR": -0.20, "BG": -0.20, "RO": 0.00,
             "CS": -0.30, "BA": -0.40, "AL": -0.60}
TI_MK = [3.60, 3.55, 3.42, 3.19, 2.81, 2.74]

# Macro environment minus public institutions (MK's macro stability stands out).
MACRO_TILT = {"SI": 0.2, "GR": 0.1, "HR": 0.0, "TR": -0.3, "BG": 0.3, "RO": 0.0,
              "CS": -0.2, "MK": 0.6, "BA": -0.1, "AL": 0.1}

SURVEY = ["internet_access_in_schools", "isp_competition", "gov_ict_prioritization",
          "gov_ict_promotion", "ict_laws"]
# (leaf, intercept, slope per level point, growth per year)
HARD = [("cellular_telephones", -20.0, 14.0, 6.0),
        ("internet_users", -8.0, 5.5, 2.5),
        ("internet_hosts", -30.0, 22.0, 6.0),
        ("telephone_lines", 4.0, 7.0, 0.4),
        ("personal_computers", -6.0, 4.5, 1.2)]

# Published-style global ranks (year, country) -> rank, synthetic.
RANKS = {
    2005: {"SI": 32, "GR": 45, "HR": 57, "BG": 61, "RO": 66, "TR": 68, "CS": 80, "MK": 82, "BA": 88, "AL": 100},
    2006: {"SI": 30, "GR": 45, "HR": 51, "TR": 59, "RO": 63, "BG": 67, "CS": 82, "MK": 84, "BA": 89, "AL": 98},
}


def technology(country: str, i: int) -> float:
    if country == "MK":
        return TI_MK[i]
    return round(GCI[country][i] + TI_OFFSET[country], 2)


def fmt(v: float, places: int) -> str:
    return f"{v:.{places}f}"


def main() -> None:
    rng = random.Random(20070101)
    rows: list[tuple[int, str, str, str]] = []
    for i, year in enumerate(YEARS):
        countries = sorted(GCI)
        # Hard data: raw values around the technology level, rounded like published tables.
        raw: dict[tuple[str, str], float] = {}
        for leaf, a, b, growth in HARD:
            for c in countries:
                level = technology(c, i) + rng.uniform(-0.35, 0.35)
                raw[(c, leaf)] = round(a + b * level + growth * i, 2)
        bounds = {leaf: (min(raw[(c, leaf)] for c in countries), max(raw[(c, leaf)] for c in countries))
                  for leaf, *_ in HARD}

        for c in countries:
            ti_target = technology(c, i)
            gci_target = GCI[c][i]
            survey = {q: round(min(6.8, max(1.2, ti_target - 0.2 + rng.uniform(-0.6, 0.6))), 2) for q in SURVEY}
            hard = {}
            for leaf, *_ in HARD:
                lo, hi = bounds[leaf]
                hard[leaf] = 1 + 6 * (raw[(c, leaf)] - lo) / (hi - lo)
            ict_sd = sum(0.2 * survey[q] for q in SURVEY)
            ict_hd = sum(0.2 * hard[leaf] for leaf, *_ in HARD)
            icts = ict_sd / 3 + 2 * ict_hd / 3

            # non-core: TI = IS/8 + 3 TTS/8 + ICTS/2 with IS = TTS = x
            x = round(2 * ti_target - icts, 10)
            assert 1.0 <= x <= 7.0, (c, year, x)
            ti = x / 8 + 3 * x / 8 + icts / 2

            # non-core: GCI = (TI + PII + MEI) / 3
            both = 3 * gci_target - ti
            pii = (both - MACRO_TILT[c]) / 2
            mei = (both + MACRO_TILT[c]) / 2
            spread = 0.3
            leaves = {
                "IS": x, "TTS": x,
                "CLS": pii + spread, "CS": pii - spread,
                "MSS": mei + spread, "CCR": mei - spread, "GW": mei - spread,
            }
            for name, value in leaves.items():
                assert 1.0 <= value <= 7.0, (c, year, name, value)
                rows.append((year, c, name, fmt(value, 10)))
            for q in SURVEY:
                rows.append((year, c, q, fmt(survey[q], 2)))
            for leaf, *_ in HARD:
                rows.append((year, c, leaf, fmt(raw[(c, leaf)], 2)))

    with open(HERE / "balkans-synthetic.csv", "w", newline="") as f:
        f.write("# Synthetic Balkans indicator panel, 2001-2006. NOT official WEF data.\n")
        f.write("# Generated by generate_synthetic_panel.py; headline scores are illustrative.\n")
        f.write("# Hard indicators: cellular telephones and telephone lines per 100 people, internet users\n")
        f.write("# per 100, internet hosts per 10,000, personal computers per 100.\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["year", "country", "indicator", "value"])
        for row in sorted(rows, key=lambda r: (r[0], r[1], r[2])):
            w.writerow(row)

    with open(HERE / "balkans-classes.csv", "w", newline="") as f:
        f.write("# All ten regional entities default to non-core innovators; edit to override.\n")
        f.write("# CS = Serbia and Montenegro, treated as one entity.\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["country", "class"])
        for c in sorted(GCI):
            w.writerow([c, "noncore"])

    with open(HERE / "balkans-ranks-synthetic.csv", "w", newline="") as f:
        f.write("# Synthetic global GCI ranks for 2005 and 2006. NOT official WEF data.\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["year", "country", "rank"])
        for year in sorted(RANKS):
            for c, r in sorted(RANKS[year].items(), key=lambda kv: kv[1]):
                w.writerow([year, c, r])


if __name__ == "__main__":
    main()
