"""opmoment: operator polynomials, operator moment sequences and positivity preservers."""
