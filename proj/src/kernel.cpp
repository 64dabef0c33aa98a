#include "pdkde/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "pdkde/numeric.hpp"

namespace pdkde {

double ordered_union_density(const std::vector<double>& q,
                             const std::vector<std::vector<double>>& pvals,
                             std::size_t n_inputs) {
    const std::size_t m = q.size();
    if (n_inputs > m) return 0.0;
    // Forward pass over singletons: a[s] accumulates, over all increasing
    // injections of the first s inputs into the singletons seen so far, the
    // product of q*p for assigned rows and (1-q) for skipped rows.
    std::vector<double> a(n_inputs + 1, 0.0);
    a[0] = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t s = std::min(j + 1, n_inputs) + 1; s-- > 1;)
            a[s] = a[s] * (1.0 - q[j]) + a[s - 1] * q[j] * pvals[j][s - 1];
        a[0] *= 1.0 - q[j];
    }
    return a[n_inputs];
}

std::vector<double> nu_triangular(int n_lower) {
    if (n_lower < 0) throw std::invalid_argument("nu_triangular: negative cardinality");
    if (n_lower == 0) return {1.0};
    std::vector<double> nu(2 * n_lower + 1, 0.0);
    const double denom = static_cast<double>((n_lower + 1)) * (n_lower + 1);
    for (int n = 0; n <= 2 * n_lower; ++n)
        nu[n] = static_cast<double>(n_lower + 1 - std::abs(n_lower - n)) / denom;
    return nu;
}

double nu_default(int n_lower, int n) {
    if (n < 0) return 0.0;
    if (n_lower == 0) return n == 0 ? 1.0 : 0.0;
    const double v = static_cast<double>(n_lower + 1 - std::abs(n_lower - n)) /
                     (static_cast<double>(n_lower + 1) * (n_lower + 1));
    return std::max(v, 0.0);
}

double q_nonempty(double persistence, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("q_nonempty: sigma must be positive");
    // distance from the center to the diagonal along the rotated axis
    return normal_cdf(persistence / (std::sqrt(2.0) * sigma));
}

double q_nonempty(const Feature& center, double sigma) {
    return q_nonempty(center.persistence(), sigma);
}

double wedge_mass(double b, double d, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("wedge_mass: sigma must be positive");
    const double lo = std::max(0.0, b - 9.0 * sigma);
    const double hi = b + 9.0 * sigma;
    if (hi <= lo) return 0.0;
    auto integrand = [&](double x) {
        return normal_pdf(x, b, sigma) * (1.0 - normal_cdf((x - d) / sigma));
    };
    return integrate_adaptive(integrand, lo, hi, 1e-10);
}

double wedge_mass(const Feature& center, double sigma) {
    return wedge_mass(center.birth, center.death, sigma);
}

double degree_zero_q(double center_death, double sigma) {
    return normal_cdf(center_death / sigma);
}

double degree_zero_pdf(double center_death, double sigma, double d) {
    if (d < 0.0) return 0.0;
    return normal_pdf(d, center_death, sigma) / degree_zero_q(center_death, sigma);
}

double upper_pdf(const UpperSingleton& s, int degree, const Feature& xi) {
    if (degree == 0) return degree_zero_pdf(s.death, s.sigma, xi.death);
    // the closed-wedge boundary keeps quadrature integrands right-continuous
    if (xi.death < xi.birth || xi.birth < 0.0) return 0.0;
    return normal_pdf(xi.birth, s.birth, s.sigma) * normal_pdf(xi.death, s.death, s.sigma) /
           s.wedge_mass;
}

double lower_pdf(const LowerModel& m, int degree, const Feature& xi) {
    if (m.centers.empty()) throw std::logic_error("lower_pdf: empty lower model");
    if (degree == 0) {
        // all lower centers project to death 0; half-Gaussian on d > 0
        if (xi.death < 0.0) return 0.0;
        return 2.0 * normal_pdf(xi.death, 0.0, m.sigma);
    }
    if (xi.death < xi.birth || xi.birth < 0.0) return 0.0;
    const double s2 = 2.0 * m.sigma * m.sigma;
    double sum = 0.0;
    for (double c : m.centers) {
        const double db = xi.birth - c;
        const double dd = xi.death - c;
        sum += std::exp(-(db * db + dd * dd) / s2);
    }
    // 1/(pi sigma^2): each diagonal-centered Gaussian carries mass ~1/2
    // above the diagonal, so the normal coefficient is doubled
    return sum / (static_cast<double>(m.n_lower()) * kPi * m.sigma * m.sigma);
}

Kernel build_kernel(const PersistenceDiagram& center, int degree, double sigma_split,
                    double sigma_band, const NuFunction& nu) {
    if (sigma_split <= 0.0 || sigma_band <= 0.0)
        throw std::invalid_argument("build_kernel: bandwidths must be positive");
    Kernel k;
    k.degree = degree;
    k.sigma_split = sigma_split;
    k.sigma_band = sigma_band;

    auto [upper, lower] = split(center, sigma_split, degree);
    std::sort(upper.features.begin(), upper.features.end(), [](const Feature& a, const Feature& b) {
        return std::pair(a.birth, a.death) < std::pair(b.birth, b.death);
    });
    for (const Feature& f : upper.features) {
        UpperSingleton s;
        s.birth = f.birth;
        s.death = f.death;
        s.sigma = sigma_band;
        if (degree == 0) {
            s.q = degree_zero_q(f.death, sigma_band);
            s.wedge_mass = s.q;
        } else {
            s.q = q_nonempty(f, sigma_band);
            s.wedge_mass = wedge_mass(f, sigma_band);
        }
        k.upper.push_back(s);
    }

    k.lower.sigma = sigma_band;
    for (const Feature& f : lower.features)
        k.lower.centers.push_back(degree == 0 ? 0.0 : 0.5 * (f.birth + f.death));
    std::sort(k.lower.centers.begin(), k.lower.centers.end());
    k.lower.nu = nu(k.lower.n_lower());

    double total = 0.0, mean = 0.0;
    for (std::size_t n = 0; n < k.lower.nu.size(); ++n) {
        total += k.lower.nu[n];
        mean += static_cast<double>(n) * k.lower.nu[n];
    }
    if (std::abs(total - 1.0) > 1e-9 || std::abs(mean - k.lower.n_lower()) > 1e-9)
        throw std::invalid_argument("build_kernel: nu must sum to 1 with mean = lower cardinality");
    return k;
}

namespace {

double nu_at(const Kernel& k, int n) {
    if (n < 0 || n >= static_cast<int>(k.lower.nu.size())) return 0.0;
    return k.lower.nu[static_cast<std::size_t>(n)];
}

bool degrees_match(const Kernel& k, std::span<const Feature> inputs) {
    for (const Feature& f : inputs)
        if (f.degree != k.degree) return false;
    return true;
}

}  // namespace

double eval_kernel(const Kernel& k, std::span<const Feature> inputs) {
    const int n = static_cast<int>(inputs.size());
    if (n > k.max_cardinality()) return 0.0;
    if (!degrees_match(k, inputs)) return 0.0;
    const int n_upper = k.n_upper();

    std::vector<std::vector<double>> pvals(n_upper, std::vector<double>(n));
    for (int j = 0; j < n_upper; ++j)
        for (int i = 0; i < n; ++i) pvals[j][i] = upper_pdf(k.upper[j], k.degree, inputs[i]);

    // suffix products of the lower density over inputs j..n-1
    std::vector<double> lower_suffix(n + 1, 1.0);
    if (k.lower.n_lower() > 0)
        for (int i = n; i-- > 0;)
            lower_suffix[i] = lower_suffix[i + 1] * lower_pdf(k.lower, k.degree, inputs[i]);

    // forward injection pass: a[j] = sum over increasing injections of the
    // first j inputs into the upper singletons of Q(gamma) * prod p
    std::vector<double> a(std::min(n, n_upper) + 1, 0.0);
    a[0] = 1.0;
    for (int j = 0; j < n_upper; ++j) {
        const double q = k.upper[j].q;
        for (int s = std::min({j + 1, n, n_upper}) + 1; s-- > 1;)
            a[s] = a[s] * (1.0 - q) + a[s - 1] * q * pvals[j][s - 1];
        a[0] *= 1.0 - q;
    }

    double total = 0.0;
    for (int j = 0; j <= std::min(n, n_upper); ++j) {
        const double w = nu_at(k, n - j);
        if (w == 0.0) continue;
        total += w * a[j] * lower_suffix[j];
    }
    return total;
}

double eval_kernel_symmetric(const Kernel& k, std::span<const Feature> inputs) {
    const int n = static_cast<int>(inputs.size());
    if (n > k.max_cardinality()) return 0.0;
    if (!degrees_match(k, inputs)) return 0.0;
    if (n > 24) throw std::invalid_argument("eval_kernel_symmetric: input cardinality too large");
    const int n_upper = k.n_upper();
    const std::size_t full = std::size_t{1} << n;

    std::vector<std::vector<double>> pvals(n_upper, std::vector<double>(n));
    for (int j = 0; j < n_upper; ++j)
        for (int i = 0; i < n; ++i) pvals[j][i] = upper_pdf(k.upper[j], k.degree, inputs[i]);

    std::vector<double> lvals(n, 0.0);
    if (k.lower.n_lower() > 0)
        for (int i = 0; i < n; ++i) lvals[i] = lower_pdf(k.lower, k.degree, inputs[i]);

    // c[mask]: sum over injective assignments of exactly the inputs in mask
    // to distinct upper singletons, of Q * prod q*p over assigned pairs
    std::vector<double> c(full, 0.0);
    c[0] = 1.0;
    std::vector<double> next(full);
    for (int j = 0; j < n_upper; ++j) {
        const double q = k.upper[j].q;
        for (std::size_t mask = 0; mask < full; ++mask) {
            double v = c[mask] * (1.0 - q);
            for (int i = 0; i < n; ++i)
                if (mask & (std::size_t{1} << i))
                    v += c[mask ^ (std::size_t{1} << i)] * q * pvals[j][i];
            next[mask] = v;
        }
        c.swap(next);
    }

    // product of lower densities over each mask
    std::vector<double> lprod(full, 1.0);
    for (std::size_t mask = 1; mask < full; ++mask) {
        const int low = __builtin_ctzll(mask);
        lprod[mask] = lprod[mask & (mask - 1)] * lvals[low];
    }

    std::vector<double> factorial(n + 1, 1.0);
    for (int i = 1; i <= n; ++i) factorial[i] = factorial[i - 1] * i;

    double total = 0.0;
    for (std::size_t mask = 0; mask < full; ++mask) {
        const int j = __builtin_popcountll(mask);
        if (j > n_upper) continue;
        const double w = nu_at(k, n - j);
        if (w == 0.0 || c[mask] == 0.0) continue;
        // the n-j unassigned inputs feed the lower product in any order
        total += w * factorial[n - j] * c[mask] * lprod[full - 1 - mask];
    }
    return total;
}

double eval_phd(const Kernel& k, const Feature& xi) {
    if (xi.degree != k.degree) return 0.0;
    double total = 0.0;
    if (k.lower.n_lower() > 0)
        total += static_cast<double>(k.lower.n_lower()) * lower_pdf(k.lower, k.degree, xi);
    for (const UpperSingleton& s : k.upper) total += s.q * upper_pdf(s, k.degree, xi);
    return total;
}

std::vector<double> cardinality_pmf(const Kernel& k) {
    std::vector<double> q;
    for (const UpperSingleton& s : k.upper) q.push_back(s.q);
    const std::vector<double> upper_pmf = poisson_binomial_pmf(q);
    std::vector<double> pmf(upper_pmf.size() + k.lower.nu.size() - 1, 0.0);
    for (std::size_t j = 0; j < upper_pmf.size(); ++j)
        for (std::size_t l = 0; l < k.lower.nu.size(); ++l)
            pmf[j + l] += upper_pmf[j] * k.lower.nu[l];
    return pmf;
}

double cardinality_pmf(const Kernel& k, int n) {
    if (n < 0) return 0.0;
    const std::vector<double> pmf = cardinality_pmf(k);
    return n < static_cast<int>(pmf.size()) ? pmf[static_cast<std::size_t>(n)] : 0.0;
}

Feature sample_wedge_gaussian(double b, double d, double sigma, int degree, RngStream& rng,
                              int max_tries) {
    for (int t = 0; t < max_tries; ++t) {
        const double gb = rng.normal(b, sigma);
        const double gd = rng.normal(d, sigma);
        if (gd > gb && gb >= 0.0) return Feature{gb, gd, degree};
    }
    throw std::runtime_error("sample_wedge_gaussian: rejection cap exceeded (degenerate center)");
}

namespace {

double sample_positive_gaussian(double center, double sigma, RngStream& rng,
                                int max_tries = 10000) {
    for (int t = 0; t < max_tries; ++t) {
        const double g = rng.normal(center, sigma);
        if (g > 0.0) return g;
    }
    throw std::runtime_error("sample_kernel: rejection cap exceeded (degenerate center)");
}

int sample_pmf(const std::vector<double>& pmf, RngStream& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        acc += pmf[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(pmf.size()) - 1;
}

}  // namespace

PersistenceDiagram sample_kernel(const Kernel& k, RngStream& rng) {
    PersistenceDiagram out;
    const double sigma = k.sigma_band;
    for (const UpperSingleton& s : k.upper) {
        if (k.degree == 0) {
            if (rng.normal(s.death, sigma) > 0.0)
                out.features.push_back(Feature{0.0, sample_positive_gaussian(s.death, sigma, rng),
                                               k.degree});
        } else {
            // presence is decided by one draw from the full Gaussian (above
            // the diagonal with probability q); the position is then drawn
            // from the wedge-restricted Gaussian
            const double gb = rng.normal(s.birth, sigma);
            const double gd = rng.normal(s.death, sigma);
            if (gd > gb)
                out.features.push_back(sample_wedge_gaussian(s.birth, s.death, sigma, k.degree, rng));
        }
    }
    if (k.lower.n_lower() > 0) {
        const int n = sample_pmf(k.lower.nu, rng);
        for (int i = 0; i < n; ++i) {
            const std::size_t c = rng.uniform_index(static_cast<std::uint64_t>(k.lower.n_lower()));
            if (k.degree == 0)
                out.features.push_back(
                    Feature{0.0, sample_positive_gaussian(0.0, sigma, rng), k.degree});
            else
                out.features.push_back(
                    sample_wedge_gaussian(k.lower.centers[c], k.lower.centers[c], sigma, k.degree,
                                          rng));
        }
    }
    return out;
}

DegreeKernels build_degree_kernels(const PersistenceDiagram& center,
                                   const std::vector<int>& degrees, double sigma_split,
                                   double sigma_band, const NuFunction& nu) {
    DegreeKernels ks;
    for (int d : degrees)
        ks.by_degree.emplace(d, build_kernel(center, d, sigma_split, sigma_band, nu));
    return ks;
}

double eval_multi_degree(const DegreeKernels& ks, const PersistenceDiagram& z) {
    std::map<int, std::vector<Feature>> parts;
    for (const Feature& f : z.features) parts[f.degree].push_back(f);
    for (const auto& [degree, feats] : parts)
        if (!ks.by_degree.count(degree)) return 0.0;

    double total = 1.0;
    for (const auto& [degree, kernel] : ks.by_degree) {
        static const std::vector<Feature> kEmpty;
        const auto it = parts.find(degree);
        const std::vector<Feature>& feats = it == parts.end() ? kEmpty : it->second;
        total *= eval_kernel_symmetric(kernel, feats);
        if (total == 0.0) return 0.0;
    }
    return total;
}

PersistenceDiagram sample_degree_kernels(const DegreeKernels& ks, RngStream& rng) {
    PersistenceDiagram out;
    for (const auto& [degree, kernel] : ks.by_degree) {
        PersistenceDiagram part = sample_kernel(kernel, rng);
        out.features.insert(out.features.end(), part.features.begin(), part.features.end());
    }
    return out;
}

}  // namespace pdkde
