# Multiple Line Atlas
# Exact invariants of multiple lines in P^3
