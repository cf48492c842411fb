# Copyright 2026 The PatternForge Authors
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

"""Elaborates Verilog files with pyslang; exits 77 when pyslang is missing."""

import sys

try:
    from pyslang import DiagnosticEngine, ast, syntax
except ImportError:
    print("pyslang not installed; skipping")
    sys.exit(77)


def check(path):
    with open(path, encoding="utf-8") as f:
        text = f.read()
    tree = syntax.SyntaxTree.fromText(text, path)
    comp = ast.Compilation()
    comp.addSyntaxTree(tree)
    diags = comp.getAllDiagnostics()
    engine = DiagnosticEngine(tree.sourceManager)
    errors = [d for d in diags if d.isError()]
    warnings = [d for d in diags if not d.isError()]
    for d in errors + warnings:
        print(engine.reportAll(tree.sourceManager, [d]).strip())
    return len(errors), len(warnings)


def main(paths):
    if not paths:
        print("usage: verilog_smoke.py FILE.v...")
        return 2
    failed = False
    for path in paths:
        errors, warnings = check(path)
        status = "ok" if errors == 0 and warnings == 0 else "FAIL"
        print(f"{status} {path}: {errors} errors, {warnings} warnings")
        failed |= errors > 0 or warnings > 0
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
