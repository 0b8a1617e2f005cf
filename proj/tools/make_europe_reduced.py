#!/usr/bin/env python3
# Copyright 2026 The egplan Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes data/europe_reduced.

Three electricity nodes stand in for Europe: each carries a fixed share of
the continental totals. RES capacities and fuel/CO2 prices are the
published ENTSO scenario projections (RES in MW, node shares summing to the
European total exactly); everything else is a placeholder magnitude, see
docs/dataset_format.md.

Usage: make_europe_reduced.py [out_dir]
"""

import csv
import math
import os
import sys

YEARS = [2020, 2025, 2030]
BRANCHES = ["EUCO", "ST", "DG"]
NODES = ["DE", "FR", "UK"]
MONTH_DAYS = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31]
HOURS_PER_MONTH = 1  # one representative hour per month
H = 12 * HOURS_PER_MONTH

# Installed RES capacity, GW, per year and branch. 2020 is the common best
# estimate.
RES_GW = {
    "onshore_wind": {2020: (161.8,) * 3, 2025: (201.3, 193.5, 193.5), 2030: (240.7, 225.1, 225.1)},
    "offshore_wind": {2020: (28.1,) * 3, 2025: (34.3, 46.1, 46.1), 2030: (40.5, 64.2, 64.0)},
    "pv": {2020: (98.2,) * 3, 2025: (138.0, 186.4, 191.6), 2030: (299.7, 230.5, 238.3)},
}
RES_SHARE = {
    "onshore_wind": {"DE": 0.50, "FR": 0.32, "UK": 0.18},
    "offshore_wind": {"DE": 0.35, "FR": 0.10, "UK": 0.55},
    "pv": {"DE": 0.50, "FR": 0.38, "UK": 0.12},
}

# Fuel and CO2 prices, EUR/MWh_th and EUR/t.
FUEL = {
    "nuclear": {2020: (1.69,) * 3, 2025: (1.69,) * 3, 2030: (1.69,) * 3},
    "lignite": {2020: (3.96,) * 3, 2025: (6.12, 3.96, 3.96), 2030: (8.27, 3.96, 3.96)},
    "hard_coal": {2020: (8.27,) * 3, 2025: (11.87, 8.99, 8.99), 2030: (15.47, 9.71, 9.71)},
    "oil": {2020: (55.76,) * 3, 2025: (64.75, 67.09, 67.09), 2030: (73.74, 78.42, 78.42)},
    "biomass": {2020: (9.0,) * 3, 2025: (9.90,) * 3, 2030: (10.80,) * 3},
}
CO2 = {2020: (18.00,) * 3, 2025: (22.50, 51.15, 34.00), 2030: (27.00, 84.30, 50.00)}

# id, kind, fuel, eta, AF, CC, IC [EUR/MW_el/a], CPF, FLH, vom, investable
TECHS = [
    ("nuclear", "thermal", "nuclear", 0.33, 0.85, 0.0, 0, 0, 0, 9.0, False),
    ("lignite", "thermal", "lignite", 0.40, 0.85, 0.40, 190000, 0, 0, 4.0, True),
    ("hard_coal", "thermal", "hard_coal", 0.46, 0.85, 0.34, 150000, 0, 0, 3.5, True),
    ("oil", "thermal", "oil", 0.35, 0.90, 0.27, 0, 0, 0, 3.0, False),
    ("biomass", "thermal", "biomass", 0.35, 0.85, 0.0, 0, 0, 0, 5.0, False),
    ("ccgt", "gas", "", 0.60, 0.90, 0.20, 85000, 0, 0, 2.0, True),
    ("ocgt", "gas", "", 0.38, 0.95, 0.20, 45000, 0, 0, 3.0, True),
    ("onshore_wind", "res", "", 1.0, 1.0, 0.0, 0, 0, 0, 0.0, False),
    ("offshore_wind", "res", "", 1.0, 1.0, 0.0, 0, 0, 0, 0.0, False),
    ("pv", "res", "", 1.0, 1.0, 0.0, 0, 0, 0, 0.0, False),
    ("psp", "psp", "", 0.75, 0.95, 0.0, 0, 8, 0, 0.0, False),
    ("reservoir", "reservoir", "", 1.0, 0.90, 0.0, 0, 0, 2500, 0.0, False),
]

# Existing non-RES capacity, MW_el, per year. Retirements leave a gap that
# the plans fill with new capacity.
EXISTING = {
    "DE": {"nuclear": (8100, 0, 0), "lignite": (21000, 15000, 9000),
           "hard_coal": (24000, 15000, 8000), "oil": (4000, 3000, 2000),
           "biomass": (9000, 9000, 9000), "ccgt": (56000, 52000, 48000),
           "ocgt": (8000, 7000, 6000), "psp": (12000, 12000, 12000),
           "reservoir": (5000, 5000, 5000)},
    "FR": {"nuclear": (70000, 64000, 58000), "lignite": (2000, 1000, 0),
           "hard_coal": (12000, 6000, 2000), "oil": (7000, 5000, 4000),
           "biomass": (5000, 5000, 5000), "ccgt": (40000, 36000, 32000),
           "ocgt": (5000, 4000, 3000), "psp": (13000, 13000, 13000),
           "reservoir": (38000, 38000, 38000)},
    "UK": {"nuclear": (9000, 6000, 5000), "hard_coal": (6000, 0, 0),
           "oil": (2000, 1000, 1000), "biomass": (4000, 4000, 4000),
           "ccgt": (30000, 28000, 24000), "ocgt": (4000, 3000, 2000),
           "psp": (3000, 3000, 3000), "reservoir": (1500, 1500, 1500)},
}
NEW_MAX = {"lignite": {"DE": 5000, "FR": 0, "UK": 0},
           "hard_coal": {"DE": 10000, "FR": 6000, "UK": 4000}}

# Average load, MW, and branch factors per year. The UK peaks in EUCO,
# the continent in DG, so no naive plan covers every node's worst case.
AVG_LOAD = {"DE": 150000, "FR": 130000, "UK": 70000}
LOAD_FACTOR = {
    2020: {"EUCO": 1.00, "ST": 1.00, "DG": 1.00},
    2025: {"EUCO": 1.00, "ST": 1.02, "DG": 1.04},
    2030: {"EUCO": 0.99, "ST": 1.05, "DG": 1.08},
}
UK_EUCO_BONUS = {2020: 0.0, 2025: 0.05, 2030: 0.10}

NTC = [("DE", "FR", 4800), ("FR", "DE", 4800), ("DE", "UK", 1400), ("UK", "DE", 1400),
       ("FR", "UK", 4000), ("UK", "FR", 4000)]

GAS_NODES = [("DE", False), ("FR", False), ("UK", False),
             ("RU", True), ("NO", True), ("QA", True)]
# Non-power gas demand, MWh_th/month on average, and branch factors.
GAS_AVG = {"DE": 7.0e7, "FR": 6.0e7, "UK": 5.4e7}
GAS_FACTOR = {
    2020: {"EUCO": 1.00, "ST": 1.00, "DG": 1.00},
    2025: {"EUCO": 0.92, "ST": 1.00, "DG": 0.98},
    2030: {"EUCO": 0.85, "ST": 1.00, "DG": 0.95},
}
SUPPLIERS = [  # id, node, cost, capacity per year [MWh_th/month]
    ("RU_prod", "RU", 17.0, (1.5e8, 1.5e8, 1.5e8)),
    ("NO_prod", "NO", 18.0, (1.0e8, 1.0e8, 0.95e8)),
    ("QA_lng", "QA", 24.0, (9.0e7, 1.0e8, 1.1e8)),
    ("UK_prod", "UK", 20.0, (3.0e7, 2.2e7, 1.5e7)),
]
GAS_ARCS = [  # from, to, cost, capacity [MWh_th/month], contract [MWh_th/month]
    ("RU", "DE", 2.0, 1.6e8, 7.0e7), ("NO", "DE", 1.2, 6.0e7, 0),
    ("NO", "UK", 1.0, 5.0e7, 0), ("QA", "UK", 3.0, 5.0e7, 0),
    ("QA", "FR", 3.0, 6.0e7, 0),
    ("DE", "FR", 0.8, 8.0e7, 0), ("FR", "DE", 0.8, 4.0e7, 0),
    ("DE", "UK", 1.0, 2.5e7, 0), ("UK", "DE", 1.0, 2.5e7, 0),
]
STORAGE = {  # node: working volume [MWh_th]
    "DE": 2.4e7, "FR": 1.3e7, "UK": 1.5e6,
}

def fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    v = round(v, 6)
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def write(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(c) if not isinstance(c, str) else c for c in r])


def hour_month(t):
    return t // HOURS_PER_MONTH


def season(m):
    # +1 in January, -1 in July.
    return math.cos(2.0 * math.pi * m / 12.0)


def split_exact(total, shares):
    out, acc = {}, 0
    for n in NODES[:-1]:
        out[n] = round(total * shares[n])
        acc += out[n]
    out[NODES[-1]] = total - acc
    return out


def main():
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(root, "data", "europe_reduced")
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "manifest.txt"), "w") as f:
        f.write("# Reduced three-node European system; see docs/dataset_format.md.\n"
                "# Generated by tools/make_europe_reduced.py.\n"
                "name = europe_reduced\n"
                f"years = {', '.join(map(str, YEARS))}\n"
                f"hours = {H}\n"
                "discount_rate = 0.05\n"
                f"branches = {', '.join(BRANCHES)}\n"
                "probabilities = 1/3, 1/3, 1/3\n"
                "literal_psp_balance = false\n"
                "storage_loss = injection\n")

    write(os.path.join(out, "time_grid.csv"), ["hour", "month", "weight[h]"],
          [(t + 1, hour_month(t) + 1, 24.0 * MONTH_DAYS[hour_month(t)] / HOURS_PER_MONTH)
           for t in range(H)])
    write(os.path.join(out, "technologies.csv"),
          ["id", "kind", "fuel", "efficiency[fraction]", "availability[fraction]",
           "carbon_content[tCO2/MWh_th]", "investment_cost[EUR/MW_el/a]",
           "capacity_power_factor[h]", "full_load_hours[h]", "vom[EUR/MWh_el]", "investable"],
          TECHS)
    write(os.path.join(out, "electricity_nodes.csv"),
          ["id", "vola[EUR/MWh_el]", "shed_max[fraction]"],
          [(n, 3000, 0.15) for n in NODES])
    write(os.path.join(out, "existing_capacity.csv"), ["tech", "node", "year", "capacity[MW_el]"],
          [(tech, n, y, caps[k]) for n in NODES for tech, caps in EXISTING[n].items()
           for k, y in enumerate(YEARS)])
    write(os.path.join(out, "new_capacity_max.csv"), ["tech", "node", "year", "capacity[MW_el]"],
          [(tech, n, y, lim[n]) for tech, lim in NEW_MAX.items() for n in NODES for y in YEARS])
    write(os.path.join(out, "efficiency_overrides.csv"),
          ["tech", "node", "year", "efficiency[fraction]"], [])

    pf_rows = []
    node_wind = {"DE": 1.0, "FR": 0.9, "UK": 1.2}
    node_sun = {"DE": 0.9, "FR": 1.1, "UK": 0.75}
    for n in NODES:
        for t in range(H):
            m = hour_month(t)
            # One hour per month stands for a whole day: daily means.
            on = node_wind[n] * (0.24 + 0.10 * season(m))
            off = node_wind[n] * (0.40 + 0.12 * season(m))
            pv = node_sun[n] * (0.11 - 0.06 * season(m))
            pf_rows += [("onshore_wind", n, t + 1, min(on, 1.0)),
                        ("offshore_wind", n, t + 1, min(off, 1.0)),
                        ("pv", n, t + 1, min(pv, 1.0))]
    write(os.path.join(out, "production_factor.csv"), ["tech", "node", "hour", "factor[fraction]"],
          pf_rows)

    chp_base = {"DE": 6000, "FR": 1500, "UK": 2000}
    write(os.path.join(out, "chp.csv"), ["node", "year", "hour", "chp[MW_el]"],
          [(n, y, t + 1, round(chp_base[n] * (1.0 + 0.5 * season(hour_month(t)))))
           for n in NODES for y in YEARS for t in range(H)])
    write(os.path.join(out, "electricity_arcs.csv"), ["from", "to", "year", "ntc[MW_el]"],
          [(a, b, y, cap) for a, b, cap in NTC for y in YEARS])

    write(os.path.join(out, "gas_nodes.csv"), ["id", "supply_only"], GAS_NODES)
    write(os.path.join(out, "gas_storage.csv"),
          ["node", "injection_cost[EUR/MWh_th]", "withdrawal_cost[EUR/MWh_th]",
           "start_level[MWh_th]", "end_level[MWh_th]", "loss[fraction]"],
          [(n, 0.5, 0.3, 0.4 * v, 0.4 * v, 0.01) for n, v in STORAGE.items()])
    write(os.path.join(out, "gas_storage_caps.csv"),
          ["node", "year", "month", "working_volume[MWh_th]", "injection_cap[MWh_th/month]",
           "withdrawal_cap[MWh_th/month]"],
          [(n, y, m + 1, v, v / 5.0, v / 3.0) for n, v in STORAGE.items() for y in YEARS
           for m in range(12)])
    write(os.path.join(out, "gas_suppliers.csv"), ["id", "node", "cost[EUR/MWh_th]"],
          [(p, n, c) for p, n, c, _ in SUPPLIERS])
    write(os.path.join(out, "gas_supply_caps.csv"),
          ["supplier", "year", "month", "capacity[MWh_th/month]"],
          [(p, y, m + 1, caps[k]) for p, _, _, caps in SUPPLIERS for k, y in enumerate(YEARS)
           for m in range(12)])
    write(os.path.join(out, "gas_arcs.csv"),
          ["from", "to", "cost[EUR/MWh_th]", "take_or_pay[fraction]"],
          [(a, b, c, 0.7) for a, b, c, _, _ in GAS_ARCS])
    write(os.path.join(out, "gas_arc_caps.csv"), ["from", "to", "year", "capacity[MWh_th/month]"],
          [(a, b, y, cap) for a, b, _, cap, _ in GAS_ARCS for y in YEARS])
    write(os.path.join(out, "gas_contracts.csv"),
          ["from", "to", "year", "month", "volume[MWh_th/month]"],
          [(a, b, y, m + 1, ltc) for a, b, _, _, ltc in GAS_ARCS if ltc for y in YEARS
           for m in range(12)])

    bh = lambda unit: [f"{b}[{unit}]" for b in BRANCHES]
    rows = []
    for n in NODES:
        for y in YEARS:
            for t in range(H):
                m = hour_month(t)
                shape = 1.0 + 0.12 * season(m)
                vals = []
                for b in BRANCHES:
                    f = LOAD_FACTOR[y][b] + (UK_EUCO_BONUS[y] if n == "UK" and b == "EUCO" else 0.0)
                    vals.append(round(AVG_LOAD[n] * f * shape, 1))
                rows.append((n, y, t + 1, *vals))
    write(os.path.join(out, "electricity_demand.csv"), ["node", "year", "hour", *bh("MWh_el/h")],
          rows)

    rows = []
    for n, supply_only in GAS_NODES:
        if supply_only:
            continue
        for y in YEARS:
            for m in range(12):
                shape = 1.0 + 0.45 * season(m)
                rows.append((n, y, m + 1,
                             *[round(GAS_AVG[n] * GAS_FACTOR[y][b] * shape) for b in BRANCHES]))
    write(os.path.join(out, "gas_demand.csv"), ["node", "year", "month", *bh("MWh_th/month")], rows)

    rows = []
    for tech, per_year in RES_GW.items():
        split = {y: [split_exact(round(gw * 1000), RES_SHARE[tech]) for gw in per_year[y]]
                 for y in YEARS}
        for n in NODES:
            for y in YEARS:
                rows.append((tech, n, y, *[split[y][s][n] for s in range(len(BRANCHES))]))
    write(os.path.join(out, "res_capacity.csv"), ["tech", "node", "year", *bh("MW_el")], rows)

    write(os.path.join(out, "fuel_prices.csv"), ["fuel", "year", *bh("EUR/MWh_th")],
          [(fuel, y, *per_year[y]) for fuel, per_year in FUEL.items() for y in YEARS])
    write(os.path.join(out, "co2_prices.csv"), ["year", *bh("EUR/t")],
          [(y, *CO2[y]) for y in YEARS])


if __name__ == "__main__":
    main()
