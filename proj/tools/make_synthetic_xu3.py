#!/usr/bin/env python3
# Copyright 2026 The GroupDNN Authors. All Rights Reserved.
#
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
# ==============================================================================
"""Writes an extrapolated Odroid XU3 operating-point profile.

Latency at the full width follows a + b / f, fitted through the measured
200 MHz and top-frequency points of each core, and scales linearly with the
number of active groups. Power is a simple static + dynamic model that does
not depend on the width. The accuracy column is left empty; the governor
fills it from a trained model or from --accuracy.
"""

import argparse
import csv
import sys

# core: (frequencies in MHz, (f_lo, t_lo ms), (f_hi, t_hi ms), static mW, dynamic mW at f_max)
CORES = {
    "A15": (range(200, 1801, 100), (200, 1020.0), (1800, 117.0), 100.0, 1200.0),
    "A7": (range(200, 1301, 100), (200, 1780.0), (1300, 280.0), 30.0, 220.0),
}
GROUPS = 4


def fit(lo, hi):
  (f1, t1), (f2, t2) = lo, hi
  b = (t1 - t2) / (1.0 / f1 - 1.0 / f2)
  return t1 - b / f1, b


def rows():
  for core, (freqs, lo, hi, p_static, p_dyn) in CORES.items():
    a, b = fit(lo, hi)
    f_max = max(freqs)
    for f in freqs:
      full = a + b / f
      power = p_static + p_dyn * (f / f_max) ** 2.5
      for k in range(1, GROUPS + 1):
        yield ["OdroidXU3", core, f * 1000000, 100 * k // GROUPS,
               "%.6g" % (full * k / GROUPS), "%.6g" % power, ""]


def main():
  parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
  parser.add_argument("--out", default="-", help="output path, '-' for stdout")
  args = parser.parse_args()
  out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
  w = csv.writer(out, lineterminator="\n")
  w.writerow(["platform", "core", "freq_hz", "config_pct", "latency_ms", "power_mw", "accuracy"])
  w.writerows(rows())
  if out is not sys.stdout:
    out.close()


if __name__ == "__main__":
  main()
