"""Primitive-root bias toolkit for prime pairs p, p+k"""
__version__ = "1.0.0"
