# This file makes infsup.config a Python package
