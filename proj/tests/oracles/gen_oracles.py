# Regenerates the constants frozen into the unit tests (mpmath, 40 digits).
import mpmath as mp

mp.mp.dps = 40


def bessel_table():
    pts = [(0.0, 0.1), (0.3, 0.01), (1.7, 2.5), (3.7, 5.0), (12.25, 0.8), (25.5, 30.0),
           (40.0, 115.0), (195.0, 115.0), (0.5, 700.0), (100.0, 1e-3), (7.1, 60.0), (60.0, 2.0)]
    print("// nu, x, ln I, ln K, I'/I, K'/K")
    for nu, x in pts:
        nu_, x_ = mp.mpf(nu), mp.mpf(x)
        i = mp.besseli(nu_, x_)
        k = mp.besselk(nu_, x_)
        di = mp.diff(lambda t: mp.besseli(nu_, t), x_)
        dk = mp.diff(lambda t: mp.besselk(nu_, t), x_)
        print("{%r, %r, %s, %s, %s, %s}," % (nu, x, mp.nstr(mp.log(i), 20), mp.nstr(mp.log(k), 20),
                                            mp.nstr(di / i, 20), mp.nstr(dk / k, 20)))


def riesz_r3():
    # (2/pi) int_0^inf grad_z e^{-lam R} / (4 pi R) dlam by quadrature
    print("// r, rp, gamma, radial, angular")
    for r, rp, g in [(0.2, 1.0, 1.0), (1.0, 0.1, 2.0), (0.05, 0.9, 0.3), (3.0, 0.5, 2.8), (0.3, 2.0, 0.0)]:
        r, rp, g = mp.mpf(r), mp.mpf(rp), mp.mpf(g)
        R = mp.sqrt(r * r + rp * rp - 2 * r * rp * mp.cos(g))
        dRdr = (r - rp * mp.cos(g)) / R
        dRdg = rp * mp.sin(g) / R  # (1/r) d/dgamma of R, gamma moving y away from y'
        f = lambda lam: -(1 + lam * R) * mp.exp(-lam * R) / (4 * mp.pi * R * R)
        I = 2 / mp.pi * mp.quad(f, [0, 1 / R, mp.inf])
        print("{%s, %s, %s, %s, %s}," % (mp.nstr(r, 6), mp.nstr(rp, 6), mp.nstr(g, 6), mp.nstr(I * dRdr, 20),
                                         mp.nstr(I * dRdg, 20)))


def riesz_radial_mode():
    # radial sector, one mode mu, d = 3, r < r':
    # (2/pi) int_0^inf d/dr [ (r r')^{1-d/2} I_mu(lam r) K_mu(lam r') ] dlam
    print("// mu, r, rp, value")
    d = 3
    for mu, r, rp in [(0.1, 0.1, 1.0), (0.1, 0.2, 2.0), (0.5, 0.1, 1.0), (1.1, 0.05, 1.0)]:
        mu, r, rp = mp.mpf(mu), mp.mpf(r), mp.mpf(rp)
        a = 1 - mp.mpf(d) / 2

        def f(lam):
            i = mp.besseli(mu, lam * r)
            di = lam * (mp.besseli(mu - 1, lam * r) + mp.besseli(mu + 1, lam * r)) / 2
            return (rp ** a) * (a * r ** (a - 1) * i + r ** a * di) * mp.besselk(mu, lam * rp)

        v = 2 / mp.pi * mp.quad(f, [0, 1 / rp, 1 / r, mp.inf])
        print("{%s, %s, %s, %s}," % (mp.nstr(mu, 6), mp.nstr(r, 6), mp.nstr(rp, 6), mp.nstr(v, 20)))


def legendre_pairs():
    print("// l, gamma, (2l+1)/(4 pi) P_l(cos gamma)")
    for l, g in [(0, 0.7), (1, 0.7), (3, 2.0), (10, 0.4), (25, 1.3)]:
        v = (2 * l + 1) / (4 * mp.pi) * mp.legendre(l, mp.cos(g))
        print("{%d, %r, %s}," % (l, g, mp.nstr(v, 20)))


bessel_table()
riesz_r3()
riesz_radial_mode()
legendre_pairs()
