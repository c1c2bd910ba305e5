"""Core computation modules"""
