"""Rate and decoding-complexity reports.

Three reports are produced:

* ``rates``: rates and normalized rates of the constructed families next
  to closed-form reference rows for established multigroup codes;
* ``exponents``: least ML-decoding exponent (power of M) over the base
  families, for N = 2..10 and rates 5/4, 2, 3, ..., N;
* ``comparison``: the exponent of the new codes against published
  exponents of competing fast-decodable codes.  The competitor numbers are
  quoted constants; none of those codes is constructed here.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from fractions import Fraction

from .fd import reference_fd_exponent, select_base, tast_exponent
from .multigroup import ConstructionError, ag_parameters, rate_ag, rate_stacked

__all__ = [
    "TABLE2_RATES",
    "table2_cells",
    "table2_grid",
    "table3_rows",
    "table1_rows",
    "COMPETITORS",
    "format_table",
    "grid_csv",
    "reproduce_tables",
    "fmt_rate",
    "cod_delay_bound",
    "maxrate_cod_rate",
]

TABLE2_RATES = (Fraction(5, 4),) + tuple(Fraction(r) for r in range(2, 11))

F = Fraction


def fmt_rate(R) -> str:
    R = Fraction(R)
    return str(R.numerator) if R.denominator == 1 else f"{R.numerator}/{R.denominator}"


def _fmt_exp(x) -> str:
    return f"{float(x):g}"


# -- exponent grid ----------------------------------------------------------

def table2_cells(N_range=range(2, 11), rates=TABLE2_RATES):
    """(N, R) pairs of the grid: every listed rate not above N."""
    return [(N, R) for N in N_range for R in rates if R <= N]


@dataclass(frozen=True)
class GridCell:
    N: int
    R: Fraction
    exponent: Fraction
    family: str
    mode: str
    K: int
    K_b: int


def table2_grid(N_range=range(2, 11), rates=TABLE2_RATES) -> list:
    out = []
    for N, R in table2_cells(N_range, rates):
        cand, prof = select_base(N, R, build=False)
        out.append(GridCell(N, R, prof.exponent, cand.family, prof.mode, prof.K, prof.K_b))
    return out


def grid_csv(cells) -> str:
    buf = io.StringIO()
    buf.write("N,R_num,R_den,exponent,family,mode,K,K_b\n")
    for c in cells:
        buf.write(f"{c.N},{c.R.numerator},{c.R.denominator},{_fmt_exp(c.exponent)},"
                  f"{c.family},{c.mode},{c.K},{c.K_b}\n")
    return buf.getvalue()


# -- comparison with published codes ----------------------------------------

# published ML-decoding exponents (power of M), keyed by (N, R)
COMPETITORS = {
    "GF(4) FD/FGD": {(2, F(1)): 0, (2, F(2)): 2, (4, F(1)): .5, (4, F(3, 2)): 2.5, (4, F(2)): 4.5,
                     (4, F(17, 8)): 5, (8, F(1)): 1.5, (8, F(2)): 9.5, (8, F(3)): 17.5, (8, F(4)): 25.5},
    "EAST": {(2, F(1)): .5, (4, F(1)): 1, (4, F(2)): 5, (6, F(1)): 1.5, (6, F(2)): 8, (6, F(3)): 14,
             (8, F(1)): 2, (8, F(2)): 10, (8, F(3)): 18, (8, F(4)): 26},
    "TAST": {(2, F(1)): .5, (2, F(2)): 2.5, (4, F(1)): 1.5, (4, F(3, 2)): 3.5, (4, F(2)): 5.5,
             (4, F(17, 8)): 6, (6, F(1)): 2.5, (6, F(2)): 8.5, (6, F(3)): 14.5, (7, F(1)): 3,
             (7, F(2)): 10, (7, F(3)): 17.5, (8, F(1)): 3.5, (8, F(2)): 11.5, (8, F(3)): 19.5,
             (8, F(4)): 27.5, (9, F(1)): 4, (9, F(2)): 13, (9, F(3)): 22, (9, F(4)): 31},
    "Srinath-Rajan FD": {(2, F(2)): 2.5, (4, F(2)): 4.5},
    "Ren et al. FGD": {(4, F(2)): 5.5, (4, F(17, 8)): 6},
    "Sirianunpiboon FD": {(4, F(3, 2)): 3},
    "Oggier FD": {(4, F(2)): 6},
    "Golden": {(2, F(2)): 2.5},
    "Silver": {(2, F(2)): 2},
}

TABLE3_POINTS = (
    (2, F(1)), (2, F(2)),
    (4, F(1)), (4, F(3, 2)), (4, F(2)), (4, F(17, 8)),
    (6, F(1)), (6, F(2)), (6, F(3)),
    (7, F(1)), (7, F(2)), (7, F(3)),
    (8, F(1)), (8, F(2)), (8, F(3)), (8, F(4)),
    (9, F(1)), (9, F(2)), (9, F(3)), (9, F(4)),
)


@dataclass(frozen=True)
class ComparisonRow:
    N: int
    R: Fraction
    new: Fraction
    family: str
    tast: Fraction
    gf4_formula: Fraction | None
    published: dict


def table3_rows(points=TABLE3_POINTS) -> list:
    rows = []
    for N, R in points:
        cand, prof = select_base(N, R, build=False)
        pub = {name: vals[(N, R)] for name, vals in COMPETITORS.items() if (N, R) in vals}
        rows.append(ComparisonRow(N, R, prof.exponent, cand.family, tast_exponent(N, R),
                                  reference_fd_exponent(N, R) if R > 1 else None, pub))
    return rows


# -- rates ------------------------------------------------------------------

@dataclass(frozen=True)
class RateRow:
    code: str
    antennas: str
    delay: str
    groups: str
    rate: str
    asymptotic_rate: str
    normalized: str
    samples: tuple = ()


def cod_delay_bound(N: int) -> int:
    """Least delay of a maximal-rate complex orthogonal design, C(2m, m-1) for N in {2m-1, 2m}."""
    m = (N + 1) // 2
    return math.comb(2 * m, m - 1)


def maxrate_cod_rate(N: int) -> Fraction:
    c = math.ceil((N - 1) / 2)
    return F(c + 1, 2 ** c)


def _ag_samples(g, count=4):
    out, N = [], 1
    while len(out) < count:
        N += 1
        try:
            ag_parameters(g, N)
        except ConstructionError:
            continue
        out.append((N, rate_ag(g, N)))
    return tuple(out)


def table1_rows() -> list:
    rows = [
        RateRow("square COD", "2^m", "N", "2RT", "(m+1)/2^m", "0", "0",
                tuple((2 ** m, F(m + 1, 2 ** m)) for m in range(0, 5))),
        RateRow("maximal-rate COD", "any", "sigma(N) = C(2m, m-1)", "2RT",
                "(ceil((N-1)/2)+1)/2^ceil((N-1)/2)", "1/2", "0",
                tuple((N, maxrate_cod_rate(N)) for N in (2, 4, 6, 8))),
        RateRow("single-symbol decodable", "2^m", "T", "RT", "m/2^(m-1)", "0", "0",
                tuple((2 ** m, F(m, 2 ** (m - 1))) for m in range(1, 5))),
        RateRow("Clifford unitary weight", "2^m", "N", "g", "g/2^floor((g+1)/2)",
                "g/2^floor((g+1)/2)", "0",
                tuple((g, F(g, 2 ** ((g + 1) // 2))) for g in range(2, 7))),
        RateRow("4-group rate-one", "2m", "N", "4", "1", "1", "0", ()),
        RateRow("2-group quasi-orthogonal", "4", "4", "2", "5/4", "NA", "NA", ()),
        RateRow("2-group, powers of two", "2^m", "N", "2", "N/4 + 1/N", "inf", "1/4",
                tuple((2 ** m, F(2 ** m, 4) + F(1, 2 ** m)) for m in range(2, 6))),
        RateRow("2-group, long delay", "any", ">= 2N", "2", "(NT - N^2 + 1)/T", "inf", "1/2 at T = 2N",
                tuple((N, F(N * 2 * N - N * N + 1, 2 * N)) for N in (2, 4, 8))),
    ]
    for g in (2, 3, 4, 5):
        rows.append(RateRow(f"AG {g}-group", "n 2^floor((g-1)/2), n >= g", "N", str(g),
                            "rate_ag(g, N)", "inf", str(F(1, g * 2 ** (g - 1))), _ag_samples(g)))
    for g in (2, 3):
        rows.append(RateRow(f"AG {g}-group stacked", "N'", f"{g}N'", str(g),
                            "N'/2^(g-1) + (g-1)/(2N')", "inf", str(F(1, 2 ** (g - 1))),
                            tuple((Np, rate_stacked(g, Np)) for Np in (2, 4, 8, 16))))
    rows.append(RateRow("division algebra", "any", "N", "1", "N", "inf", "1", ()))
    return rows


# -- formatting -------------------------------------------------------------

def format_table(header, rows) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _report_rates():
    rows = []
    for r in table1_rows():
        key = "g" if r.code.startswith("Clifford") else "N"
        samp = ", ".join(f"{key}={n}: {fmt_rate(v)}" for n, v in r.samples)
        rows.append((r.code, r.antennas, r.delay, r.groups, r.rate, r.asymptotic_rate, r.normalized, samp))
    return format_table(("code", "antennas", "delay", "groups", "rate", "lim R", "lim R/N", "examples"),
                        rows)


def _report_grid(cells):
    rates = TABLE2_RATES
    header = ["N"] + [fmt_rate(R) for R in rates]
    by = {(c.N, c.R): c for c in cells}
    rows = []
    for N in sorted({c.N for c in cells}):
        row = [str(N)]
        for R in rates:
            c = by.get((N, R))
            row.append("" if c is None else f"{_fmt_exp(c.exponent)} {c.family}")
        rows.append(row)
    return format_table(header, rows)


def _report_comparison(rows):
    names = list(COMPETITORS)
    header = ["N", "R", "new", "base"] + names
    out = []
    for r in rows:
        out.append([r.N, fmt_rate(r.R), _fmt_exp(r.new), r.family]
                   + [_fmt_exp(r.published[n]) if n in r.published else "" for n in names])
    return format_table(header, out)


def _comparison_csv(rows):
    names = list(COMPETITORS)
    buf = io.StringIO()
    buf.write("N,R_num,R_den,new,family," + ",".join(n.replace(",", "") for n in names) + "\n")
    for r in rows:
        vals = [_fmt_exp(r.published[n]) if n in r.published else "" for n in names]
        buf.write(f"{r.N},{r.R.numerator},{r.R.denominator},{_fmt_exp(r.new)},{r.family},"
                  + ",".join(vals) + "\n")
    return buf.getvalue()


def reproduce_tables(which=(1, 2, 3)) -> dict:
    """Text and CSV for the requested reports, keyed 'table1'.. 'table3'."""
    out = {}
    if 1 in which:
        text = _report_rates()
        out["table1"] = {"text": text, "csv": None, "rows": table1_rows()}
    if 2 in which:
        cells = table2_grid()
        out["table2"] = {"text": _report_grid(cells), "csv": grid_csv(cells), "rows": cells}
    if 3 in which:
        rows = table3_rows()
        out["table3"] = {"text": _report_comparison(rows), "csv": _comparison_csv(rows), "rows": rows}
    return out
