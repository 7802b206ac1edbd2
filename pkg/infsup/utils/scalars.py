"""
Utilidades de escalares compartilhadas pelos módulos de cálculo.

Dois modos convivem em todo o pacote:
- float64: arrays numpy de ponto flutuante, comparações com tolerância;
- exact-rational: arrays numpy com dtype=object contendo fractions.Fraction,
  onde todas as operações são exatas.

Este módulo concentra a conversão de entradas, a construção de arrays, a
tolerância em cada modo e a formatação de saída.
"""
import math
from decimal import Decimal
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from infsup.models import ScalarMode

Scalar = Any  # float ou Fraction, conforme o modo


def to_scalar(value: Any, mode: ScalarMode) -> Scalar:
    """
    Converte um valor de entrada para o escalar do modo pedido.

    Em modo racional, literais decimais viram razões exatas (0.5 -> 1/2) e
    strings "p/q" são aceitas. Valores não finitos são rejeitados nos dois modos.

    Raises:
        ValueError: se o valor não for numérico ou não for finito
    """
    if isinstance(value, bool) or value is None:
        raise ValueError(f"not a number: {value!r}")
    if mode == ScalarMode.EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, np.integer)):
            return Fraction(int(value))
        if isinstance(value, (float, np.floating)):
            if not math.isfinite(value):
                raise ValueError(f"non-finite entry: {value!r}")
            # shortest repr is the decimal literal the caller wrote
            return Fraction(repr(float(value)))
        if isinstance(value, Decimal):
            if not value.is_finite():
                raise ValueError(f"non-finite entry: {value!r}")
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"not an exact decimal or ratio: {value!r}")
        raise ValueError(f"not a number: {value!r}")

    if isinstance(value, str):
        try:
            result = float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a number: {value!r}")
    elif isinstance(value, (int, float, Fraction, Decimal, np.integer, np.floating)):
        result = float(value)
    else:
        raise ValueError(f"not a number: {value!r}")
    if not math.isfinite(result):
        raise ValueError(f"non-finite entry: {value!r}")
    return result


def dtype_for(mode: ScalarMode):
    return object if mode == ScalarMode.EXACT else np.float64


def as_vector(values: Iterable[Any], mode: ScalarMode) -> np.ndarray:
    items = [to_scalar(v, mode) for v in values]
    return np.array(items, dtype=dtype_for(mode))


def as_matrix(rows: Sequence[Sequence[Any]], mode: ScalarMode) -> np.ndarray:
    """Converte uma lista de linhas numa matriz 2D do modo pedido (linhas de mesmo comprimento)."""
    converted = [[to_scalar(v, mode) for v in row] for row in rows]
    if not converted or not converted[0]:
        raise ValueError("matrix must be nonempty")
    width = len(converted[0])
    if any(len(row) != width for row in converted):
        raise ValueError("rows must have equal length")
    matrix = np.empty((len(converted), width), dtype=dtype_for(mode))
    for i, row in enumerate(converted):
        for j, v in enumerate(row):
            matrix[i, j] = v
    return matrix


def zeros(shape, mode: ScalarMode) -> np.ndarray:
    if mode == ScalarMode.EXACT:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=np.float64)


def zero(mode: ScalarMode) -> Scalar:
    return Fraction(0) if mode == ScalarMode.EXACT else 0.0


def one(mode: ScalarMode) -> Scalar:
    return Fraction(1) if mode == ScalarMode.EXACT else 1.0


def tolerance(tol: Any, mode: ScalarMode) -> Scalar:
    """Tolerância no tipo do modo; em modo racional 1e-9 vira exatamente 1/10^9."""
    value = to_scalar(tol, mode)
    if value < 0:
        raise ValueError(f"tolerance must be nonnegative, got {tol!r}")
    return value


def to_list(array: np.ndarray) -> list:
    """Array numpy -> lista Python de float ou Fraction (nunca escalares numpy)."""
    return [v if isinstance(v, Fraction) else float(v) for v in np.asarray(array).ravel().tolist()]


def exact_sum(values: Iterable[Scalar], mode: ScalarMode) -> Scalar:
    if mode == ScalarMode.EXACT:
        return sum(values, Fraction(0))
    return math.fsum(float(v) for v in values)


def _is_finite_decimal(q: Fraction) -> bool:
    den = q.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    return den == 1


def format_scalar(value: Scalar, mode: ScalarMode) -> Any:
    """
    Formata um escalar para JSON.

    float64 -> número JSON; exact-rational -> string decimal exata quando o
    denominador só tem fatores 2 e 5 ("0.5", "-250"), senão "p/q" ("-1000/3").
    """
    if mode != ScalarMode.EXACT:
        return float(value)
    q = value if isinstance(value, Fraction) else to_scalar(value, mode)
    if q.denominator == 1:
        return str(q.numerator)
    if not _is_finite_decimal(q):
        return f"{q.numerator}/{q.denominator}"
    digits = 0
    scaled = q
    while scaled.denominator != 1:
        scaled *= 10
        digits += 1
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def scaled_tolerance(tol: Scalar, M: np.ndarray, mode: ScalarMode) -> Scalar:
    """Residual slack for direct re-checks: tol itself in exact mode, tol·(1 + max|M|) in float."""
    if mode == ScalarMode.EXACT:
        return tol
    return tol * (1.0 + float(np.max(np.abs(M.astype(float)))))
