"""
Return distributions and power-law tails
========================================

Heavy tails on synthetic data: moments of a Gaussian versus a
conditional-volatility series, and the tail index of a Pareto sample with its
lower bound chosen by the KS scan.
"""

import numpy as np

from stylized_facts import (
    GeneratorSpec,
    ccdf,
    fit_normalized_tail,
    generate,
    moments,
    normalize,
    select_xmin,
)
from stylized_facts.synth import spliced_sample

# iid Gaussian returns: skewness and excess kurtosis near zero
gauss = generate(GeneratorSpec("iid-gaussian", 20000, seed=1, params={"sigma": 0.03}))
print("gaussian  ", moments(gauss))

# volatility clustering fattens the tails even though the shocks are Gaussian
garch = generate(GeneratorSpec("sym-condvol", 20000, seed=1))
print("condvol   ", moments(garch))

# kurtosis conventions: population excess is the default
m = moments(garch, excess=False, bias=False)
print("raw sample kurtosis %.3f" % m.kurtosis)

# tail of |r_N| for the conditional-volatility series
fit = fit_normalized_tail(normalize(garch))
print("tail fit: k = %.2f +- %.2f above x_min = %.2f (%d points, KS %.4f)"
      % (fit.k, fit.k_std_err, fit.x_min, fit.n_tail, fit.ks_distance))

# a known answer: Pareto tail with k=3 spliced onto an exponential body at 2
x, frac = spliced_sample(10000, k=3.0, x_splice=2.0, body_rate=0.5, seed=3)
fit = select_xmin(x)
print("spliced sample (%.0f%% in tail): x_min = %.2f, k = %.2f"
      % (100 * frac, fit.x_min, fit.k))

# the empirical CCDF is what a log-log plot of the tail shows
c = ccdf(x)
keep = (c.ccdf > 0) & (c.sorted_values > 3)
slope = np.polyfit(np.log(c.sorted_values[keep]), np.log(c.ccdf[keep]), 1)[0]
print("log-log CCDF slope above 3: %.2f" % slope)
