"""omega-coend - bounded symbolic engine for free coloured omega-operads and their Coend cells"""
__version__ = "0.1.0"
