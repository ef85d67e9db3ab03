"""
petic tests package.
"""
