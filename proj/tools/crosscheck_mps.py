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
"""Solves MPS files with HiGHS and prints "<file> <status> <objective>" lines.

Usage: crosscheck_mps.py FILE.mps [FILE.mps ...]
Exit status 0 on success, 3 when highspy is not installed, 1 otherwise.
"""

import sys


def main(argv):
    if len(argv) < 2:
        print(__doc__.strip(), file=sys.stderr)
        return 1
    try:
        import highspy
    except ImportError:
        print("highspy is not installed", file=sys.stderr)
        return 3
    rc = 0
    for path in argv[1:]:
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        if h.readModel(path) != highspy.HighsStatus.kOk:
            print(f"{path} read-error nan")
            rc = 1
            continue
        h.run()
        status = h.modelStatusToString(h.getModelStatus()).lower().replace(" ", "-")
        objective = h.getInfo().objective_function_value
        print(f"{path} {status} {objective!r}")
        if status != "optimal":
            rc = 1
    return rc


if __name__ == "__main__":
    sys.exit(main(sys.argv))
