# Um módulo por grupo de subcomandos; cada um expõe register(subparsers, common)
