#pragma once

#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "pdkde/diagram.hpp"
#include "pdkde/rng.hpp"

namespace pdkde {

// ---------------------------------------------------------------------------
// Independent singleton diagrams and their combination.
//
// A singleton is a random diagram with at most one feature: present with
// probability q, positioned according to pdf when present. The ordered
// global density of the union of independent singletons is
//
//   f(xi_1, ..., xi_N) = sum over increasing injections gamma of
//       [ prod_{j not hit} (1 - q_j) ] [ prod_k q_gamma(k) p_gamma(k)(xi_k) ]
//
// which is what ordered_union_density computes from the precomputed value
// matrix pvals[j][k] = p_j(xi_k).
// ---------------------------------------------------------------------------

template <typename Point>
struct Singleton {
    double q = 0.0;                               // chance to be nonempty, in (0,1)
    std::function<double(const Point&)> pdf;      // conditional position density
};

template <typename Point>
using SingletonSystem = std::vector<Singleton<Point>>;

double ordered_union_density(const std::vector<double>& q,
                             const std::vector<std::vector<double>>& pvals,
                             std::size_t n_inputs);

template <typename Point>
double combine_singletons(const SingletonSystem<Point>& system,
                          const std::vector<Point>& inputs) {
    std::vector<double> q(system.size());
    std::vector<std::vector<double>> pvals(system.size(), std::vector<double>(inputs.size()));
    for (std::size_t j = 0; j < system.size(); ++j) {
        q[j] = system[j].q;
        for (std::size_t k = 0; k < inputs.size(); ++k) pvals[j][k] = system[j].pdf(inputs[k]);
    }
    return ordered_union_density(q, pvals, inputs.size());
}

// P[|union of singletons| = n] for n = 0..M (Poisson binomial in the q's).
template <typename Point>
std::vector<double> singleton_cardinality_pmf(const SingletonSystem<Point>& system);

// ---------------------------------------------------------------------------
// Kernel centered at a persistence diagram.
// ---------------------------------------------------------------------------

// Long-persistence feature modeled individually: isotropic Gaussian at the
// center, present with probability q (mass above the diagonal), positioned
// by the Gaussian restricted to the wedge and renormalized by wedge_mass.
// Degree-0 centers sit at birth 0 and use the 1-D model in the death
// coordinate; there q == wedge_mass == mass on {d > 0}.
struct UpperSingleton {
    double birth = 0.0;
    double death = 0.0;
    double sigma = 1.0;
    double q = 0.0;
    double wedge_mass = 1.0;
};

// Short-persistence features modeled collectively: cardinality drawn from
// pmf nu (mean n_lower), positions i.i.d. from an equal mixture of
// Gaussians centered at the diagonal projections of the lower features.
// Degree 0 projects to death 0 instead.
struct LowerModel {
    std::vector<double> centers;  // diagonal positions (b_i + d_i) / 2
    double sigma = 1.0;
    std::vector<double> nu;       // nu[n], sums to 1, mean = centers.size()

    int n_lower() const { return static_cast<int>(centers.size()); }
};

struct Kernel {
    int degree = 1;
    double sigma_split = 1.0;
    double sigma_band = 1.0;
    std::vector<UpperSingleton> upper;
    LowerModel lower;

    int n_upper() const { return static_cast<int>(upper.size()); }
    int max_cardinality() const {
        return n_upper() + static_cast<int>(lower.nu.size()) - 1;
    }
};

using NuFunction = std::function<std::vector<double>(int n_lower)>;

// The triangular pmf nu(n) = max{(N+1 - |N-n|) / (N+1)^2, 0} with mean N on
// support [0, 2N]; delta at 0 when N == 0. Returned as nu[0..2N].
std::vector<double> nu_triangular(int n_lower);
double nu_default(int n_lower, int n);

// P[feature survives] for an upper center: the mass of the center Gaussian
// above the diagonal, which reduces to Phi(persistence / (sqrt(2) sigma)).
double q_nonempty(const Feature& center, double sigma);
double q_nonempty(double persistence, double sigma);

// Mass of the center Gaussian on the wedge {d > b >= 0}, via 1-D adaptive
// quadrature (absolute tolerance 1e-10).
double wedge_mass(const Feature& center, double sigma);
double wedge_mass(double b, double d, double sigma);

// Modified-Gaussian density of an upper singleton at a feature; zero
// outside the wedge.
double upper_pdf(const UpperSingleton& s, int degree, const Feature& xi);

// Mixture density of the lower model at a feature; zero outside the wedge.
// Undefined (throws) when the lower model is empty.
double lower_pdf(const LowerModel& m, int degree, const Feature& xi);

// 1-D restricted Gaussian for degree-0 features: Gaussian at center_death
// truncated to d > 0 and renormalized.
double degree_zero_pdf(double center_death, double sigma, double d);
double degree_zero_q(double center_death, double sigma);

// Builds the kernel for the degree-`degree` features of `center`:
// splits at sigma_split, models upper features as singletons with
// bandwidth sigma_band, projects lower features onto the diagonal.
Kernel build_kernel(const PersistenceDiagram& center, int degree, double sigma_split,
                    double sigma_band, const NuFunction& nu = nu_triangular);

// Ordered global pdf (first j inputs bound to upper injections, the rest to
// lower factors, weighted by nu(N-j)).
double eval_kernel(const Kernel& k, std::span<const Feature> inputs);

// Density at the input as a multiset: the sum of the ordered pdf over all
// permutations of the inputs, computed without enumerating N! terms. The
// symmetric vector-convention density is this value divided by N!.
double eval_kernel_symmetric(const Kernel& k, std::span<const Feature> inputs);

// Probability hypothesis density: integrates over a region to the expected
// feature count there. n_lower * lower_pdf + sum_j q_j * upper_pdf_j.
double eval_phd(const Kernel& k, const Feature& xi);

// P[|D| = n]: convolution of nu with the Poisson binomial of the upper
// presence probabilities.
std::vector<double> cardinality_pmf(const Kernel& k);
double cardinality_pmf(const Kernel& k, int n);

// Exact draw from the kernel: upper singletons survive with probability q
// and are positioned by wedge-restricted rejection; the lower count is
// drawn from nu with positions from the lower mixture. A degenerate center
// (rejection cap 10^4 exceeded) raises std::runtime_error.
PersistenceDiagram sample_kernel(const Kernel& k, RngStream& rng);

// One draw from an isotropic Gaussian at (b, d) restricted to the wedge.
Feature sample_wedge_gaussian(double b, double d, double sigma, int degree, RngStream& rng,
                              int max_tries = 10000);

// ---------------------------------------------------------------------------
// Multi-degree composition: independent per-degree kernels. Under the
// multiset convention the per-degree set densities multiply directly (the
// vector convention's Lambda(N) = prod N_k! / (sum N_k)! cancels against
// the N_k! -> |N|! change of normalization).
// ---------------------------------------------------------------------------

struct DegreeKernels {
    std::map<int, Kernel> by_degree;
};

DegreeKernels build_degree_kernels(const PersistenceDiagram& center,
                                   const std::vector<int>& degrees, double sigma_split,
                                   double sigma_band, const NuFunction& nu = nu_triangular);

// Multiset-convention density of Z under the product of per-degree kernels.
// Degrees present in Z but absent from the model contribute zero.
double eval_multi_degree(const DegreeKernels& ks, const PersistenceDiagram& z);

PersistenceDiagram sample_degree_kernels(const DegreeKernels& ks, RngStream& rng);

// ---------------------------------------------------------------------------

template <typename Point>
std::vector<double> singleton_cardinality_pmf(const SingletonSystem<Point>& system) {
    std::vector<double> pmf{1.0};
    for (const auto& s : system) {
        std::vector<double> next(pmf.size() + 1, 0.0);
        for (std::size_t k = 0; k < pmf.size(); ++k) {
            next[k] += pmf[k] * (1.0 - s.q);
            next[k + 1] += pmf[k] * s.q;
        }
        pmf = std::move(next);
    }
    return pmf;
}

}  // namespace pdkde
