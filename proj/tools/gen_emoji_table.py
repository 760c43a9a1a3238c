#!/usr/bin/env python3
# Copyright 2026 The ttrnn Authors. All Rights Reserved.
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
"""Regenerates data/emoji_aliases.tsv from the Python `emoji` package.

Each output line is `<hex codepoints separated by spaces>\t:<alias>:`.
Aliases are lowercased and restricted to [a-z0-9_-] plus non-ASCII letters so
they survive the later cleaning steps unchanged.
"""
import re
import sys

import emoji

REPLACEMENTS = {"#": "hash", "*": "asterisk", "&": "and"}

LICENSE = """\
# Copyright 2026 The ttrnn Authors. All Rights Reserved.
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

"""


def sanitize(name: str) -> str:
    body = name.strip(":").lower()
    out = []
    for ch in body:
        if ch in REPLACEMENTS:
            out.append(REPLACEMENTS[ch])
        elif ch in "'’":
            continue
        elif ch.isalnum() or ch in "_-":
            out.append(ch)
        else:
            out.append("_")
    return ":" + re.sub("_+", "_", "".join(out)).strip("_") + ":"


def main() -> None:
    rows = []
    for seq, info in emoji.EMOJI_DATA.items():
        if all(ord(c) < 128 for c in seq):
            continue
        cps = " ".join(f"{ord(c):X}" for c in seq)
        rows.append((cps, sanitize(info["en"])))
    rows.sort()
    out = sys.stdout
    out.write(LICENSE)
    out.write(f"# emoji {emoji.__version__} alias snapshot; {len(rows)} entries\n")
    for cps, alias in rows:
        out.write(f"{cps}\t{alias}\n")


if __name__ == "__main__":
    main()
