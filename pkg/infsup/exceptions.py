"""
Módulo de exceções do infsup.
Centraliza os erros da biblioteca e o código de saída que cada um produz na CLI.
"""
from typing import Optional

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class InfsupError(Exception):
    """Exceção base para erros do infsup."""
    exit_code: int = EXIT_NUMERICAL

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InstanceError(InfsupError):
    """Entrada malformada: JSON/CSV inválido, dimensões inconsistentes, entradas não finitas."""
    exit_code = EXIT_USAGE

    def __init__(self, detail: str, field_path: Optional[str] = None):
        self.field_path = field_path
        if field_path:
            detail = f"{field_path}: {detail}"
        super().__init__(detail)


class PreconditionError(InfsupError):
    """A theorem hypothesis or operation precondition does not hold on the given sample."""
    exit_code = EXIT_USAGE


class NumericalFailureError(InfsupError):
    """Falha numérica: limite de iterações, resíduo acima da tolerância, indecisão na faixa de tolerância."""
    exit_code = EXIT_NUMERICAL
