"""Independent high-precision reference values for the test suite.

Run with mpmath installed; paste the output into tests/common/reference_values.hpp.
"""
import mpmath as mp

mp.mp.dps = 40

h = mp.mpf("6.62607015e-34")
hbar = h / (2 * mp.pi)
e = mp.mpf("1.602176634e-19")
kB = mp.mpf("1.380649e-23")
c_light = mp.mpf("299792458")

phi0 = h / (2 * e)
RQ = h / (4 * e**2)

Ic = mp.mpf("2e-6")
wp = 2 * mp.pi * mp.mpf("1e12")
CJ = 2 * mp.pi * Ic / (phi0 * wp**2)
C0 = mp.mpf("5e-17")
a = mp.mpf("0.25e-6")
Lloop = mp.mpf("1e-11")


def ics(f):
    return 2 * Ic * mp.cos(mp.pi * f)


def L(f, I=0):
    i = ics(f)
    if I == 0:
        return phi0 / (2 * mp.pi * i)
    return phi0 * mp.asin(I / i) / (2 * mp.pi * I)


def c(f):
    return a / mp.sqrt(L(f) * C0)


def wps(f):
    return mp.sqrt(2 * mp.pi * ics(f) / (2 * CJ * phi0))


def ZA(f, c0=C0):
    return RQ * mp.sqrt(2 * mp.pi * e**2 / (phi0 * c0 * Ic) / mp.cos(mp.pi * f))


def TH(g):
    return hbar / (2 * mp.pi * kB) * g


def P(T):
    return mp.pi / (12 * hbar) * (kB * T) ** 2


out = {
    "kFluxQuantum": phi0,
    "kResistanceQuantum": RQ,
    "kJunctionCapacitance": CJ,
    "kInductanceZeroFlux": L(0),
    "kInductanceHalfCurrent": L(0, Ic),  # I = I_c^s / 2 at zero flux
    "kVelocityZeroFlux": c(0),
    "kLightSpeedRatio": c_light / c(0),
    "kSquidCurrent02": ics(0.2),
    "kSqrtCos02": mp.sqrt(mp.cos(0.2 * mp.pi)),
    "kJosephsonEnergy": phi0 * ics(0) / (2 * mp.pi),
    "kChargingEnergy": e**2 / (4 * CJ),
    "kBetaL10pH": 2 * mp.pi * Lloop * Ic / phi0,
    "kPlasmaFrequency02": wps(0.2),
    "kZaRq_C1e16": ZA(0, mp.mpf("1e-16")) / RQ,
    "kZaRq_C5e17": ZA(0, mp.mpf("5e-17")) / RQ,
    "kZaRq_C1e17": ZA(0, mp.mpf("1e-17")) / RQ,
    "kZaRq_C5e18": ZA(0, mp.mpf("5e-18")) / RQ,
    "kZaRq_045": ZA(mp.mpf("0.45")) / RQ,
    "kImpedanceCheck": (ZA(mp.mpf("0.2")) + 50) / RQ,
    "kHawkingAt1e11": TH(mp.mpf("1e11")),
    "kGradientCap": wps(0) / (2 * mp.pi * 10),
    "kHawkingAtCap": TH(wps(0) / (2 * mp.pi * 10)),
    "kPowerAt012K": P(mp.mpf("0.12")),
    "kCutoffLength": c(0) / wps(0),
    "kHorizonFlux": mp.acos(mp.mpf("0.95") ** 2) / mp.pi,
    # energy reflection off Z2/Z1 = sqrt(L2/L1)
    "kStepReflection": ((mp.cos(0.2 * mp.pi) ** -0.5 - 1) / (mp.cos(0.2 * mp.pi) ** -0.5 + 1)) ** 2,
}

for k, v in out.items():
    print(f"inline constexpr double {k} = {mp.nstr(v, 17)};")
