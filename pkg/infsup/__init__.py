"""Certificados e testemunhas de infsup-convexidade para programas infinitos amostrados."""

__version__ = "0.1.0"
