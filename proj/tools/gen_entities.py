#!/usr/bin/env python3
"""Regenerates src/core/entity_table.inc from the HTML5 named character set."""
import html.entities
import sys

XML_PREDEFINED = {"lt;", "gt;", "amp;", "quot;", "apos;"}


def escape(s):
    return "".join("\\x%02x" % b for b in s.encode("utf-8"))


def main(out):
    rows = sorted((k[:-1], v) for k, v in html.entities.html5.items()
                  if k.endswith(";") and k not in XML_PREDEFINED)
    with open(out, "w", encoding="utf-8") as f:
        f.write("// Generated by tools/gen_entities.py. Do not edit.\n")
        f.write("// {name, utf8 replacement}, sorted by name.\n")
        for name, value in rows:
            f.write('{"%s", "%s"},\n' % (name, escape(value)))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/core/entity_table.inc")
