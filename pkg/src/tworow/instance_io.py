"""MIP instance model, MPS reader, optimum sidecars and CSV reports."""
import csv
import io
import math
import os

INF = math.inf


class MpsError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class Instance:
    """min c.x + c0  s.t.  row_i(x) {<=,=,>=} rhs_i,  lower <= x <= upper."""

    def __init__(self, name, obj, row_senses, rhs, columns, lower, upper,
                 is_integer, obj_const=0.0, var_names=None, row_names=None):
        self.name = name
        self.obj = [float(c) for c in obj]
        self.obj_const = float(obj_const)
        self.row_senses = [str(s) for s in row_senses]
        self.rhs = [float(b) for b in rhs]
        self.columns = [[(int(i), float(v)) for i, v in col] for col in columns]
        self.lower = [float(v) for v in lower]
        self.upper = [float(v) for v in upper]
        self.is_integer = [bool(v) for v in is_integer]
        self.var_names = list(var_names) if var_names else [f"x{j}" for j in range(len(obj))]
        self.row_names = list(row_names) if row_names else [f"r{i}" for i in range(len(rhs))]
        self.validate()

    @property
    def num_vars(self):
        return len(self.obj)

    @property
    def num_rows(self):
        return len(self.rhs)

    def validate(self):
        n, m = self.num_vars, self.num_rows
        for name, seq, size in (("lower", self.lower, n), ("upper", self.upper, n),
                                ("is_integer", self.is_integer, n), ("columns", self.columns, n),
                                ("row_senses", self.row_senses, m)):
            if len(seq) != size:
                raise ValueError(f"{name} has length {len(seq)}, expected {size}")
        for j, col in enumerate(self.columns):
            for i, _ in col:
                if not 0 <= i < m:
                    raise ValueError(f"column {j} references row {i} out of range")
        for j, (lo, up) in enumerate(zip(self.lower, self.upper)):
            if lo > up:
                raise ValueError(f"variable {self.var_names[j]} has lower {lo} > upper {up}")
        for s in self.row_senses:
            if s not in ("L", "G", "E"):
                raise ValueError(f"unknown row sense {s!r}")

    def dense_rows(self):
        A = [[0.0] * self.num_vars for _ in range(self.num_rows)]
        for j, col in enumerate(self.columns):
            for i, v in col:
                A[i][j] += v
        return A

    def row_activity(self, x):
        A = self.dense_rows()
        return [sum(a * xj for a, xj in zip(row, x)) for row in A]

    def is_feasible(self, x, tol=1e-7):
        for j, xj in enumerate(x):
            if xj < self.lower[j] - tol or xj > self.upper[j] + tol:
                return False
            if self.is_integer[j] and abs(xj - round(xj)) > tol:
                return False
        for act, s, b in zip(self.row_activity(x), self.row_senses, self.rhs):
            if s == "L" and act > b + tol or s == "G" and act < b - tol or s == "E" and abs(act - b) > tol:
                return False
        return True

    def objective(self, x):
        return sum(c * v for c, v in zip(self.obj, x)) + self.obj_const

    def same_model(self, other, tol=1e-12):
        """Structural equality used for round-trip checks."""
        def close(a, b):
            return a == b or abs(a - b) <= tol
        return (self.name == other.name and self.row_senses == other.row_senses
                and all(close(a, b) for a, b in zip(self.rhs, other.rhs))
                and all(close(a, b) for a, b in zip(self.obj, other.obj))
                and self.lower == other.lower and self.upper == other.upper
                and self.is_integer == other.is_integer
                and [sorted(c) for c in self.columns] == [sorted(c) for c in other.columns])

    def __repr__(self):
        return f"Instance({self.name!r}, vars={self.num_vars}, rows={self.num_rows})"


_SECTIONS = ("NAME", "OBJSENSE", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA")


def parse_mps(text):
    """Parse the fixed/free MPS subset (whitespace separated fields)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    name = ""
    obj_row = None
    row_index = {}
    row_names, senses = [], []
    var_index = {}
    var_names, columns, obj, is_int = [], [], [], []
    seen_entries = set()
    rhs = {}
    ranges = {}
    bounds = []
    obj_const = 0.0
    section = None
    order = []
    integer_mode = False
    ended = False
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip()
        if not line.strip() or line.lstrip().startswith("*"):
            continue
        fields = line.split()
        if not raw[0].isspace():
            head = fields[0].upper()
            if head not in _SECTIONS:
                raise MpsError(f"unknown section {fields[0]!r}", lineno)
            if ended:
                raise MpsError("content after ENDATA", lineno)
            if order and _SECTIONS.index(head) < _SECTIONS.index(order[-1]):
                raise MpsError(f"section {head} out of order after {order[-1]}", lineno)
            if head in order:
                raise MpsError(f"duplicate section {head}", lineno)
            if head in ("COLUMNS", "RHS", "RANGES", "BOUNDS") and "ROWS" not in order:
                raise MpsError(f"section {head} out of order before ROWS", lineno)
            order.append(head)
            section = head
            if head == "NAME":
                name = fields[1] if len(fields) > 1 else ""
            elif head == "OBJSENSE" and len(fields) > 1:
                _check_sense(fields[1], lineno)
            elif head == "ENDATA":
                ended = True
            continue
        if section is None:
            raise MpsError("data before any section header", lineno)
        if section == "OBJSENSE":
            _check_sense(fields[0], lineno)
        elif section == "ROWS":
            if len(fields) != 2:
                raise MpsError("ROWS entries need a type and a name", lineno)
            kind, rname = fields[0].upper(), fields[1]
            if kind == "N":
                if obj_row is None:
                    obj_row = rname
                continue
            if kind not in ("L", "G", "E"):
                raise MpsError(f"unknown row type {kind!r}", lineno)
            if rname in row_index:
                raise MpsError(f"duplicate row {rname!r}", lineno)
            row_index[rname] = len(row_names)
            row_names.append(rname)
            senses.append(kind)
        elif section == "COLUMNS":
            if len(fields) >= 3 and fields[1].strip("'\"").upper() == "MARKER":
                tag = fields[2].strip("'\"").upper()
                if tag == "INTORG":
                    integer_mode = True
                elif tag == "INTEND":
                    integer_mode = False
                else:
                    raise MpsError(f"unknown marker {fields[2]!r}", lineno)
                continue
            if len(fields) not in (3, 5):
                raise MpsError("COLUMNS entries need 3 or 5 fields", lineno)
            cname = fields[0]
            if cname not in var_index:
                var_index[cname] = len(var_names)
                var_names.append(cname)
                columns.append([])
                obj.append(0.0)
                is_int.append(integer_mode)
            j = var_index[cname]
            for rname, val in zip(fields[1::2], fields[2::2]):
                v = _num(val, lineno)
                if (j, rname) in seen_entries:
                    raise MpsError(f"duplicate entry for column {cname!r} row {rname!r}", lineno)
                seen_entries.add((j, rname))
                if rname == obj_row:
                    obj[j] = v
                elif rname in row_index:
                    columns[j].append((row_index[rname], v))
                else:
                    raise MpsError(f"unknown row {rname!r}", lineno)
        elif section in ("RHS", "RANGES"):
            pairs = fields[1:] if len(fields) in (3, 5) else fields
            if len(pairs) not in (2, 4):
                raise MpsError(f"malformed {section} entry", lineno)
            for rname, val in zip(pairs[0::2], pairs[1::2]):
                v = _num(val, lineno)
                if section == "RHS" and rname == obj_row:
                    obj_const = -v
                    continue
                if rname not in row_index:
                    raise MpsError(f"unknown row {rname!r}", lineno)
                (rhs if section == "RHS" else ranges)[row_index[rname]] = v
        elif section == "BOUNDS":
            if len(fields) < 3:
                raise MpsError("malformed BOUNDS entry", lineno)
            kind = fields[0].upper()
            if kind in ("FR", "MI", "PL", "BV"):
                cname = fields[2] if len(fields) >= 3 else None
                val = _num(fields[3], lineno) if len(fields) >= 4 else None
            else:
                if len(fields) < 4:
                    raise MpsError(f"bound {kind} needs a value", lineno)
                cname, val = fields[2], _num(fields[3], lineno)
            if cname not in var_index:
                raise MpsError(f"unknown column {cname!r} in BOUNDS", lineno)
            if kind not in ("LO", "UP", "FX", "FR", "MI", "PL", "BV"):
                raise MpsError(f"unsupported bound type {kind!r}", lineno)
            bounds.append((kind, var_index[cname], val, lineno))
    if not ended:
        raise MpsError("missing ENDATA", lineno + 1)
    if obj_row is None:
        raise MpsError("no objective (N) row", None)

    n = len(var_names)
    lower = [0.0] * n
    upper = [INF] * n
    for kind, j, val, ln in bounds:
        if kind == "LO":
            lower[j] = val
        elif kind == "UP":
            upper[j] = val
            if val < 0 and lower[j] == 0.0:
                lower[j] = -INF
        elif kind == "FX":
            lower[j] = upper[j] = val
        elif kind == "FR":
            lower[j], upper[j] = -INF, INF
        elif kind == "MI":
            lower[j] = -INF
        elif kind == "PL":
            upper[j] = INF
        elif kind == "BV":
            lower[j], upper[j] = 0.0, 1.0
            is_int[j] = True

    rhs_list = [rhs.get(i, 0.0) for i in range(len(row_names))]
    senses = list(senses)
    # materialize ranges as a second row with the opposite sense
    for i, R in sorted(ranges.items()):
        b = rhs_list[i]
        s = senses[i]
        if s == "L":
            lo_hi = (b - abs(R), b)
        elif s == "G":
            lo_hi = (b, b + abs(R))
        else:
            lo_hi = (b, b + R) if R >= 0 else (b + R, b)
        senses[i] = "G"
        rhs_list[i] = lo_hi[0]
        k = len(row_names)
        row_names.append(row_names[i] + "_rng")
        senses.append("L")
        rhs_list.append(lo_hi[1])
        for col in columns:
            extra = [(k, v) for r, v in col if r == i]
            col.extend(extra)
    return Instance(name, obj, senses, rhs_list, columns, lower, upper, is_int,
                    obj_const, var_names, row_names)


def _check_sense(word, lineno):
    if word.upper() not in ("MIN", "MINIMIZE"):
        raise MpsError(f"only minimization is supported, got OBJSENSE {word}", lineno)


def _num(tok, lineno):
    try:
        return float(tok)
    except ValueError:
        raise MpsError(f"bad number {tok!r}", lineno) from None


def read_mps(path):
    with open(path, "rb") as fh:
        return parse_mps(fh.read())


def write_mps(inst):
    """Free-format MPS text for an instance (used for round-trip tests)."""
    out = [f"NAME {inst.name}", "ROWS", " N obj"]
    for s, rn in zip(inst.row_senses, inst.row_names):
        out.append(f" {s} {rn}")
    out.append("COLUMNS")
    marker = False
    for j, col in enumerate(inst.columns):
        if inst.is_integer[j] != marker:
            tag = "'INTORG'" if inst.is_integer[j] else "'INTEND'"
            out.append(f" M{j} 'MARKER' {tag}")
            marker = inst.is_integer[j]
        vn = inst.var_names[j]
        out.append(f" {vn} obj {inst.obj[j]!r}")
        for i, v in col:
            out.append(f" {vn} {inst.row_names[i]} {v!r}")
    if marker:
        out.append(" Mend 'MARKER' 'INTEND'")
    out.append("RHS")
    for i, b in enumerate(inst.rhs):
        if b != 0:
            out.append(f" rhs {inst.row_names[i]} {b!r}")
    if inst.obj_const:
        out.append(f" rhs obj {-inst.obj_const!r}")
    out.append("BOUNDS")
    for j in range(inst.num_vars):
        lo, up, vn = inst.lower[j], inst.upper[j], inst.var_names[j]
        if lo == -INF and up == INF:
            out.append(f" FR bnd {vn}")
            continue
        if lo == up:
            out.append(f" FX bnd {vn} {lo!r}")
            continue
        if lo == -INF:
            out.append(f" MI bnd {vn}")
        elif lo != 0:
            out.append(f" LO bnd {vn} {lo!r}")
        if up != INF:
            out.append(f" UP bnd {vn} {up!r}")
    out.append("ENDATA")
    return "\n".join(out) + "\n"


def read_optima(path_or_text):
    """Sidecar of `name = value` lines; `#` starts a comment."""
    if os.path.exists(str(path_or_text)):
        with open(path_or_text) as fh:
            text = fh.read()
    else:
        text = str(path_or_text)
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'name = value'")
        key, val = (p.strip() for p in line.split("=", 1))
        v = float(val)
        if not math.isfinite(v):
            raise ValueError(f"line {lineno}: optimum for {key} is not finite")
        out[key] = v
    return out


REPORT_FIELDS = ("instance", "round", "gap_closed_pct", "cuts_added", "cuts_deleted",
                 "time_generate_s", "time_resolve_s")


class RoundReport:
    def __init__(self, instance, round, gap_closed_pct, cuts_added, cuts_deleted,
                 t_generate, t_resolve, objective=None):
        self.instance = instance
        self.round = int(round)
        self.gap_closed_pct = float(gap_closed_pct)
        self.cuts_added = int(cuts_added)
        self.cuts_deleted = int(cuts_deleted)
        self.t_generate = float(t_generate)
        self.t_resolve = float(t_resolve)
        self.objective = objective

    def as_row(self):
        return [self.instance, self.round, f"{self.gap_closed_pct:.6f}", self.cuts_added,
                self.cuts_deleted, f"{self.t_generate:.6f}", f"{self.t_resolve:.6f}"]

    def __eq__(self, other):
        return isinstance(other, RoundReport) and self.as_row() == other.as_row()

    def __repr__(self):
        return (f"RoundReport({self.instance}, round={self.round}, gap={self.gap_closed_pct:.2f}%, "
                f"added={self.cuts_added}, deleted={self.cuts_deleted})")


def write_report(rows, destination):
    """CSV report; ``destination`` is a path or a writable text stream."""
    if hasattr(destination, "write"):
        _write_csv(rows, destination)
        return
    with open(destination, "w", newline="") as fh:
        _write_csv(rows, fh)


def _write_csv(rows, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(REPORT_FIELDS)
    for r in rows:
        w.writerow(r.as_row())


def read_report(source):
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source) as fh:
            text = fh.read()
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != REPORT_FIELDS:
        raise ValueError(f"unexpected header {reader.fieldnames}")
    return [RoundReport(r["instance"], r["round"], r["gap_closed_pct"], r["cuts_added"],
                        r["cuts_deleted"], r["time_generate_s"], r["time_resolve_s"])
            for r in reader]
