"""Rees algebras of almost linearly presented grade-2 perfect ideals."""
