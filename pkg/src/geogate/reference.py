"""Published reference values the verification suite compares against.

All fidelities are stored as fractions (not percent).  ``RB_STANDARD`` are
standard randomized-benchmarking average fidelities at sigma_delta/Omega =
0.02; ``RB_INTERLEAVED`` the per-gate interleaved values; ``FF_TABLE`` the
integrated 1/f filter-function fidelities at S0 = 2.67e6 Hz^2, alpha = 1.01,
f_Rabi = 4 MHz, f_uv = 320 kHz.
"""

RB_STANDARD = {
    "naive": 0.99957,
    "geo": 0.99919,
    "opt": 0.99998,
}

RB_INTERLEAVED = {
    "naive": {
        "X/2": 0.99957, "X/4": 0.99953, "Y/2": 0.99954,
        "Y/4": 0.99960, "Z/2": 0.99884, "Z/4": 0.99969,
    },
    "geo": {
        "X/2": 0.99919, "X/4": 0.99878, "Y/2": 0.99898,
        "Y/4": 0.99868, "Z/2": 0.99913, "Z/4": 0.99905,
    },
    "opt": {
        "X/2": 0.99978, "X/4": 0.99975, "Y/2": 0.99976,
        "Y/4": 0.99974, "Z/2": 0.99975, "Z/4": 0.99977,
    },
}

FF_TABLE = {
    "naive": {
        "X/2": 0.99615, "X/4": 0.99887, "Y/2": 0.99615,
        "Y/4": 0.99887, "Z/2": 0.97693, "Z/4": 0.99775,
    },
    "geo": {
        "X/2": 0.97779, "X/4": 0.97153, "Y/2": 0.97759,
        "Y/4": 0.97153, "Z/2": 0.97374, "Z/4": 0.97041,
    },
    "opt": {
        "X/2": 0.99934, "X/4": 0.99996, "Y/2": 0.99934,
        "Y/4": 0.99999, "Z/2": 0.99550, "Z/4": 0.99883,
    },
}

# Experimental noise figures used by the filter-function pipeline defaults.
NOISE_S0_HZ2 = 2.67e6
NOISE_ALPHA = 1.01
RABI_FREQUENCY_HZ = 4e6
NOISE_F_UV_HZ = 320e3
RB_SIGMA_DELTA = 0.02
