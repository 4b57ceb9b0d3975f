"""Numerical experiments around almost primes in short intervals.

Modules:
    core_arith       smallest-prime-factor sieve, factorisation, d_k, Psi(x, y)
    buchstab         Buchstab's function omega(u)
    sieve_integrals  the deficiency integrals I2, I4 and the density margin
    minorant         the Harman-sieve minorant and the interval experiments
    dirichlet        Dirichlet polynomials, mean values and large values
    exponents        exact rational exponent bookkeeping
    audits           seeded instance families for the mean-value audits
    reports, cli     report emission and the command-line interface
"""

__version__ = "0.1.0"
SCHEMA_VERSION = "almostprime-lab/1"
