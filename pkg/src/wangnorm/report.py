"""Plain-text reports: ``key: value`` lines and ``begin <name>`` / ``end`` blocks."""


class Report:
    def __init__(self):
        self.lines = []
        self.exit_code = 0

    def kv(self, key, value):
        self.lines.append(f"{key}: {value}")

    def block(self, name, lines):
        self.lines.append(f"begin {name}")
        self.lines.extend(lines)
        self.lines.append("end")

    def text(self):
        return "\n".join(self.lines) + "\n"


def parse_report(text):
    """Split a report into (top-level key/values, list of (block name, lines)).

    Blocks do not nest; a ``begin`` inside a block is an error.
    """
    values = {}
    blocks = []
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("begin "):
            if current is not None:
                raise ValueError(f"line {lineno}: nested block")
            current = (line[6:].strip(), [])
        elif line == "end":
            if current is None:
                raise ValueError(f"line {lineno}: 'end' outside a block")
            blocks.append(current)
            current = None
        elif current is not None:
            current[1].append(line)
        else:
            key, sep, value = line.partition(": ")
            if sep:
                values[key] = value
    if current is not None:
        raise ValueError("unterminated block")
    return values, blocks
