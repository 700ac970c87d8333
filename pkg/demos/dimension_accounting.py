"""Information accounting: mapped states occupy a small effective space.

The translation uses d modes but a fixed mean photon number mu, so the state
lives, up to a Poisson tail probability, in the span of Fock states whose
total photon number is within Delta of mu.  That span has dimension at most
2 Delta C(floor(mu) + Delta + d - 1, d - 1), whose log2 grows like log2(d):
the transmitted information stays logarithmic in the mode count.
"""

import math

from cohsim import effective_dimension_bound, poisson_tail_bound, transmitted_info

mu, delta = 1.0, 5

print(f"effective dimension bound at mu = {mu}, window half-width Delta = {delta}")
print(f"{'d':>7} {'log2 d':>8} {'log2 bound':>11} {'ratio':>7} {'tail <=':>10}")
for exp in range(4, 15, 2):
    d = 2**exp
    b = effective_dimension_bound(mu, delta, d)
    ratio = b.log2_d_alpha_upper / math.log2(d)
    print(
        f"{d:>7} {math.log2(d):>8.1f} {b.log2_d_alpha_upper:>11.2f}"
        f" {ratio:>7.3f} {b.tail_probability_upper:>10.2e}"
    )

print()
print("widening the window trades dimension for tail probability (d = 1024):")
for w in (1, 3, 5, 8, 12):
    b = effective_dimension_bound(mu, w, 1024)
    print(
        f"  Delta = {w:>2}: log2 dim <= {b.log2_d_alpha_upper:7.2f},"
        f" tail <= {b.tail_probability_upper:.2e}"
    )

print()
print("the tail bound itself, against the window width at mu = 4:")
for w in (2, 4, 8, 16):
    print(f"  Delta = {w:>2}: P(|N - mu| >= Delta) <= {poisson_tail_bound(4.0, w):.3e}")

print()
print("for contrast, information transmitted by a d-dimensional state:")
for d in (64, 1024, 16384):
    print(f"  d = {d:>6}: {transmitted_info(d):.1f} bits")
