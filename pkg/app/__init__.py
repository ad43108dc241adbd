"""redmod - torsion functors, reducedness and t-regularity over finite commutative rings."""
