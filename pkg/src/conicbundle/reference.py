"""Reference instances used by the verification suite."""

F13_CUBIC = ("x^3 + 5*x^2*y + 12*x^2*z + 7*x*y^2 + 7*x*y*z + 3*x*z^2 + 10*y^3 + y^2*z"
             " + 2*y*z^2 + 6*z^3")
F13_CENTER = "1:0:0"
F13_RESIDUAL = ("4:10:1", "7:12:1", "6:1:1", "2:7:1", "2:4:1", "4:1:0")
F13_NODAL_CUBIC = "x*y^2 + 2*x*y*z + 11*x*z^2 + 9*y^3 + y^2*z + 10*y*z^2"

E6_SEXTIC = ("1/2*y^4*z^2 + y^3*z^3 + 1/2*x*y^4*z + x*y^3*z^2 - x^2*y^3*z - 3*x^2*y^2*z^2"
             " - x^3*y^3 - 2*x^3*y^2*z + 1/2*x^3*y*z^2 + 3*x^4*y^2 - 1/2*x^4*y*z + x^4*z^2")
E6_POINT = "0:0:1"
CENSUS_PRIMES = (5, 7, 11)

CHATELET_CUBIC = "x^3 - 2"
