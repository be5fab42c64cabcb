"""Runtime imported by scripts that fairspec generates.

Standard library only. The semantics follow the fairspec engine: CSV cells that match the
decimal grammar are numbers, empty cells are missing, relative selectors use nearest-rank
quantiles over the full column, and rows missing any referenced cell are dropped.
"""

import ast
import csv
import io
import math
import re

_NUMBER = re.compile(r"[+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)([eE][+-]?[0-9]+)?\Z")
_RANK_SLACK = 1e-9


class FairnessError(Exception):
    """Base class; subclasses carry the engine's error names."""


def _error_class(name):
    cls = type(name, (FairnessError,), {})
    globals()[name] = cls
    return cls


for _name in (
    "IoError", "CsvError", "DuplicateColumn", "ReservedColumnName", "EmptyColumn",
    "NonNumericColumn", "MissingColumn", "TypeMismatch", "EmptyCondition", "UndefinedRatio",
    "MissingLabels", "DegenerateBenefit", "DivisionByZero", "DomainError", "NonFiniteValue",
):
    _error_class(_name)


class Cell:
    __slots__ = ("text", "number")

    def __init__(self, text):
        self.text = text
        self.number = None
        if text and _NUMBER.match(text):
            value = float(text)
            if math.isfinite(value):
                self.number = value

    @property
    def missing(self):
        return self.text == ""

    @property
    def is_number(self):
        return self.number is not None


class Table:
    def __init__(self, header, rows):
        self.header = list(header)
        self.rows = rows
        self.index = {}
        for i, name in enumerate(self.header):
            if name in self.index:
                raise DuplicateColumn("duplicate column '%s'" % name)
            self.index[name] = i

    def require(self, name):
        if name not in self.index:
            raise MissingColumn("no column named '%s'" % name)
        return self.index[name]

    def column(self, name):
        i = self.require(name)
        return [row[i] for row in self.rows]

    def add_column(self, name, cells):
        if name in self.index:
            raise DuplicateColumn("duplicate column '%s'" % name)
        self.index[name] = len(self.header)
        self.header.append(name)
        for row, cell in zip(self.rows, cells):
            row.append(cell)


def read_csv(path):
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as e:
        raise IoError("cannot read dataset '%s': %s" % (path, e))
    text = raw.decode("utf-8", errors="surrogateescape")
    if text.startswith("\ufeff"):
        text = text[1:]
    records = [r for r in csv.reader(io.StringIO(text, newline="")) if r]
    if not records:
        raise CsvError("%s: missing header row" % path)
    header = records[0]
    for name in header:
        if name.startswith("__"):
            raise ReservedColumnName("%s: column '%s' uses the reserved '__' prefix" % (path, name))
    rows = []
    for n, rec in enumerate(records[1:], start=2):
        if len(rec) != len(header):
            raise CsvError("%s: row %d has %d fields, expected %d" % (path, n, len(rec), len(header)))
        rows.append([Cell(t) for t in rec])
    return Table(header, rows)


class top:
    def __init__(self, fraction):
        self.fraction = fraction


class bottom:
    def __init__(self, fraction):
        self.fraction = fraction


def nearest_rank(p, n):
    k = math.ceil(p * n - _RANK_SLACK)
    return min(n, max(1, k))


def _numeric(cells, column):
    values = []
    for c in cells:
        if c.missing:
            continue
        if not c.is_number:
            raise TypeMismatch("relative selector on text data: column '%s' holds '%s'" % (column, c.text))
        values.append(c.number)
    return values


def _select(table, column, selector):
    cells = table.column(column)
    if isinstance(selector, (top, bottom)):
        values = sorted(_numeric(cells, column))
        if not values:
            return [False] * len(cells)
        if isinstance(selector, top):
            q = values[nearest_rank(selector.fraction, len(values)) - 1]
            return [c.is_number and c.number > q for c in cells]
        q = values[nearest_rank(1.0 - selector.fraction, len(values)) - 1]
        return [c.is_number and c.number < q for c in cells]
    if isinstance(selector, str):
        return [not c.missing and c.text == selector for c in cells]
    return [c.is_number and c.number == selector for c in cells]


def _flags(mask):
    return [Cell("1") if m else Cell("0") for m in mask]


def _compare(lhs, op, rhs):
    if isinstance(op, ast.Eq):
        return lhs == rhs
    if isinstance(op, ast.NotEq):
        return lhs != rhs
    if isinstance(op, ast.Lt):
        return lhs < rhs
    if isinstance(op, ast.LtE):
        return lhs <= rhs
    if isinstance(op, ast.Gt):
        return lhs > rhs
    if isinstance(op, ast.GtE):
        return lhs >= rhs
    raise ValueError("unsupported comparison")


def _literal(node):
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _literal(node.operand)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, str)):
        return float(node.value) if not isinstance(node.value, str) else node.value
    raise ValueError("unsupported literal")


class _Predicate:
    def __init__(self, source, table):
        self.table = table
        self.root = ast.parse(source, mode="eval").body
        self._check(self.root)

    def _check(self, node):
        if isinstance(node, ast.BoolOp):
            for v in node.values:
                self._check(v)
        elif isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.Not):
            self._check(node.operand)
        elif isinstance(node, ast.Compare):
            self.table.require(node.left.id)
        else:
            raise ValueError("unsupported predicate")

    def __call__(self, row):
        return self._eval(self.root, row)

    def _eval(self, node, row):
        if isinstance(node, ast.BoolOp):
            if isinstance(node.op, ast.And):
                return all(self._eval(v, row) for v in node.values)
            return any(self._eval(v, row) for v in node.values)
        if isinstance(node, ast.UnaryOp):
            return not self._eval(node.operand, row)
        cell = row[self.table.index[node.left.id]]
        op = node.ops[0]
        lit = _literal(node.comparators[0])
        if cell.missing:
            return False
        if isinstance(lit, str):
            return _compare(cell.text.encode("utf-8", "surrogateescape"), op,
                            lit.encode("utf-8", "surrogateescape"))
        if not cell.is_number:
            return isinstance(op, ast.NotEq)
        return _compare(cell.number, op, lit)


class _RowExpr:
    def __init__(self, source, table):
        self.table = table
        self.root = ast.parse(source, mode="eval").body
        self.source = source

    def __call__(self, row, row_number):
        return self._eval(self.root, row, row_number)

    def _eval(self, node, row, row_number):
        if isinstance(node, ast.BinOp):
            lhs = self._eval(node.left, row, row_number)
            rhs = self._eval(node.right, row, row_number)
            if isinstance(node.op, ast.Add):
                return lhs + rhs
            if isinstance(node.op, ast.Sub):
                return lhs - rhs
            if isinstance(node.op, ast.Mult):
                return lhs * rhs
            if rhs == 0.0:
                raise DivisionByZero("`%s` is 0 in row %d" % (ast.unparse(node.right), row_number))
            return lhs / rhs
        if isinstance(node, ast.Name):
            cell = row[self.table.require(node.id)]
            if not cell.is_number:
                raise TypeMismatch("column '%s' has non-numeric value '%s' in row %d"
                                   % (node.id, cell.text, row_number))
            return cell.number
        return _literal(node)


class FairnessMetric:
    def __init__(self, data, unprivileged_group, privileged_group, ground_truth_label_name,
                 predicted_label_name, positive_outcome, outcome_label_name=None,
                 sensitive_variables=None, other_columns=()):
        outcome = outcome_label_name or predicted_label_name or ground_truth_label_name
        sensitive_variables = sensitive_variables or {}
        referenced = [outcome]
        for name in [predicted_label_name, ground_truth_label_name]:
            if name is not None:
                referenced.append(name)
        referenced += [column for column, _ in sensitive_variables.values()]
        referenced += list(other_columns)
        referenced += list(unprivileged_group) + list(privileged_group)
        idx = [data.require(c) for c in referenced]
        keep = [r for r, row in enumerate(data.rows) if not any(row[i].missing for i in idx)]
        self.rows_skipped = len(data.rows) - len(keep)

        def kept(mask):
            return _flags([mask[r] for r in keep])

        def group_mask(group):
            mask = [True] * len(data.rows)
            for column, selector in group.items():
                mask = [a and b for a, b in zip(mask, _select(data, column, selector))]
            return mask

        table = Table(data.header, [list(data.rows[r]) for r in keep])
        table.add_column("__outcome", kept(_select(data, outcome, positive_outcome)))
        self.has_truth = ground_truth_label_name is not None
        if self.has_truth:
            table.add_column("__truth", kept(_select(data, ground_truth_label_name, positive_outcome)))
        for variable, (column, values) in sensitive_variables.items():
            for value, selector in values.items():
                table.add_column("__sv_%s_%s" % (variable, value), kept(_select(data, column, selector)))
        table.add_column("__priv", kept(group_mask(privileged_group)))
        table.add_column("__unpriv", kept(group_mask(unprivileged_group)))
        self.table = table

    # Composable primitives.

    def _filter(self, predicate):
        return _Predicate(predicate, self.table)

    def group_size(self, predicate):
        f = self._filter(predicate)
        return sum(1 for row in self.table.rows if f(row))

    def probability(self, event, given=None):
        ev = self._filter(event)
        rows = self.table.rows
        if given is not None:
            cond = self._filter(given)
            rows = [row for row in rows if cond(row)]
            if not rows:
                raise EmptyCondition("no rows satisfy condition `%s`" % given)
        elif not rows:
            raise EmptyCondition("probability over an empty table")
        return sum(1 for row in rows if ev(row)) / len(rows)

    def expected_value(self, body, given=None):
        expr = _RowExpr(body, self.table)
        cond = self._filter(given) if given is not None else None
        total, n = 0.0, 0
        for r, row in enumerate(self.table.rows):
            if cond is not None and not cond(row):
                continue
            total += expr(row, r + 1)
            n += 1
        if n == 0:
            raise EmptyCondition("no rows satisfy condition `%s`" % given if given is not None
                                 else "expected value over an empty table")
        return total / n

    def summation(self, over, body):
        f = self._filter(over)
        expr = _RowExpr(body, self.table)
        total = 0.0
        for r, row in enumerate(self.table.rows):
            if f(row):
                total += expr(row, r + 1)
        return total

    def logarithm(self, value, base):
        if not value > 0.0:
            raise DomainError("logarithm of non-positive value %r" % value)
        return math.log(value) / math.log(base)

    # Built-in group metrics, unprivileged minus (or over) privileged.

    def _rate(self, group, truth):
        return self.probability("__outcome == 1", "%s == 1 and __truth == %d" % (group, truth))

    def _require_truth(self, name):
        if not self.has_truth:
            raise MissingLabels("%s needs a bound ground-truth column" % name)

    def statistical_parity_difference(self):
        return (self.probability("__outcome == 1", "__unpriv == 1")
                - self.probability("__outcome == 1", "__priv == 1"))

    def disparate_impact(self):
        pu = self.probability("__outcome == 1", "__unpriv == 1")
        pp = self.probability("__outcome == 1", "__priv == 1")
        if pp == 0.0:
            raise UndefinedRatio("disparate_impact is undefined: privileged group has no positive outcomes")
        return pu / pp

    def equal_opportunity_difference(self):
        self._require_truth("equal_opportunity_difference")
        return self._rate("__unpriv", 1) - self._rate("__priv", 1)

    def average_odds_difference(self):
        self._require_truth("average_odds_difference")
        tpr = self._rate("__unpriv", 1) - self._rate("__priv", 1)
        fpr = self._rate("__unpriv", 0) - self._rate("__priv", 0)
        return 0.5 * (fpr + tpr)

    # Built-in individual metrics over the benefit b = yhat - y + 1.

    def _benefit_counts(self, name):
        self._require_truth(name)
        yhat = self.table.column("__outcome")
        y = self.table.column("__truth")
        counts = [0, 0, 0]
        for a, b in zip(yhat, y):
            counts[int(a.number) - int(b.number) + 1] += 1
        n = sum(counts)
        if n == 0:
            raise EmptyCondition("no rows to compute benefits over")
        mu = (counts[1] + 2 * counts[2]) / n
        if mu == 0.0:
            raise DegenerateBenefit("mean benefit is 0")
        return counts, float(n), mu

    def generalized_entropy_index(self, alpha=2.0):
        counts, n, mu = self._benefit_counts("generalized_entropy_index")
        if counts[0] > 0 and alpha < 0:
            raise DegenerateBenefit("zero benefit with negative alpha")
        total = 0.0
        for b in range(3):
            total += counts[b] * math.pow(b / mu, alpha)
        return max((total - n) / (n * alpha * (alpha - 1)), 0.0)

    def theil_index(self):
        counts, n, mu = self._benefit_counts("theil_index")
        v = 0.0
        for b in (1, 2):
            x = b / mu
            v += counts[b] * x * math.log(x)
        return max(v / n, 0.0)


def verdict(value, op, threshold, tolerance):
    """'Fair' iff the tolerance-widened condition holds, else 'Biased'."""
    if not math.isfinite(value):
        raise NonFiniteValue("metric value %r is not finite" % value)
    if op == "==":
        fair = abs(value - threshold) <= tolerance
    elif op == "<=":
        fair = value <= threshold + tolerance
    elif op == ">=":
        fair = value >= threshold - tolerance
    elif op == "<":
        fair = value < threshold + tolerance
    elif op == ">":
        fair = value > threshold - tolerance
    else:
        lo, hi = threshold
        fair = lo - tolerance <= value <= hi + tolerance
    return "Fair" if fair else "Biased"


def format_value(value):
    return "%.12g" % (value + 0.0)
