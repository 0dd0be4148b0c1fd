"""High-precision reference values frozen into the unit tests."""
import mpmath as mp
import numpy as np

mp.mp.dps = 40

# negbin contribution y*eta - (theta+y)*log(theta+e^eta)
th = mp.mpf(10)
print("negbin loglik y=0 eta=0:", mp.nstr(-th * mp.log(th + 1), 17))
print("poisson loglik y=3 eta=1:", mp.nstr(3 - mp.e, 17))

# negbin relation function derivatives at eta=0
u = lambda e: e - mp.log(th + mp.exp(e))
print("negbin u, u', u'':", [mp.nstr(mp.diff(u, 0, k), 17) for k in range(3)])

# probit relation function u = log(Phi/(1-Phi))
Phi = lambda x: mp.ncdf(x)
up = lambda e: mp.log(Phi(e) / (1 - Phi(e)))
print("probit u, u', u'' at 0:", [mp.nstr(mp.diff(up, 0, k), 17) for k in range(3)])
print("probit u, u', u'' at 1.3:", [mp.nstr(mp.diff(up, mp.mpf('1.3'), k), 17) for k in range(3)])

for x in ["-40", "-30", "-10", "-8", "-3", "-0.5", "0", "1.7", "3", "8", "12", "40"]:
    # complementary form avoids the 1 - tiny cancellation of ncdf for x > 0
    t = mp.mpf(x)
    lp = mp.log1p(-mp.erfc(t / mp.sqrt(2)) / 2) if t > 0 else mp.log(mp.erfc(-t / mp.sqrt(2)) / 2)
    print("logPhi", x, mp.nstr(lp, 20))

# negbin fisher at beta=0 single row x=1: u'^2 * b''(u) with b'' = mu + mu^2/theta
print("negbin fisher:", mp.nstr((th / (th + 1)) ** 2 * (1 + 1 / th), 17))
