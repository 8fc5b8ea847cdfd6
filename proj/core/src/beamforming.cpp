// SPDX-License-Identifier: Apache-2.0
//
// hrris: link-level simulator for hybrid relay-reflecting intelligent surfaces
// Copyright (C) 2026 The hrris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "hrris/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hrris
{

namespace
{

constexpr double ln2 = 0.69314718055994530942;

// Candidates must beat the incumbent by more than rounding noise.
constexpr double improvement_eps = 1e-13;

bool improves(double candidate, double incumbent)
{
    return candidate > incumbent + improvement_eps * std::abs(incumbent);
}

// q = L L^H with only the numerically nonzero eigen-directions kept.
CMat covariance_root(const CMat &q)
{
    Eigen::SelfAdjointEigenSolver<CMat> eig(q);
    const Eigen::VectorXd &ev = eig.eigenvalues();
    const double top = ev.size() > 0 ? ev.maxCoeff() : 0.0;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > 1e-14 * top && ev(i) > 0.0)
            keep.push_back(i);
    CMat root(q.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
        root.col(static_cast<Eigen::Index>(k)) = eig.eigenvectors().col(keep[k]) * std::sqrt(ev(keep[k]));
    return root;
}

// log2 det(I + C^-1 Y Y^H).
double whitened_rate(const CMat &y, const CMat &c)
{
    if (y.cols() == 0)
        return 0.0;
    Eigen::LLT<CMat> chol(c);
    const CMat z = chol.matrixL().solve(y);
    CMat m = z * z.adjoint();
    m.diagonal().array() += 1.0;
    Eigen::LLT<CMat> mc(m);
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        logdet += std::log(mc.matrixLLT()(i, i).real());
    return std::max(0.0, 2.0 * logdet / ln2);
}

struct LoopTerms
{
    double a2;       // alpha^2
    double drive;    // alpha^2 (s + sigma_r2)
    double feedback; // alpha^2 sigma_si2
};

// Common amplitude factor t in [0, 1] such that sum_m p_m(t alpha_m) <= target.
double shrink_factor(std::span<const LoopTerms> terms, double target)
{
    if (terms.empty())
        return 1.0;
    if (target <= 0.0)
        return 0.0;
    auto total = [&](double x) {
        double f = 0.0;
        for (const auto &t : terms)
            f += x * t.drive / (1.0 - x * t.feedback);
        return f;
    };
    if (total(1.0) <= target * (1.0 + budget_tolerance))
        return 1.0;
    // f(x) is convex and increasing in x = t^2; Newton from the right stays feasible-side.
    double x = 1.0;
    for (int it = 0; it < 100; ++it)
    {
        double f = 0.0;
        double fp = 0.0;
        for (const auto &t : terms)
        {
            const double den = 1.0 - x * t.feedback;
            f += x * t.drive / den;
            fp += t.drive / (den * den);
        }
        const double excess = f - target;
        if (excess <= 1e-14 * target)
            break;
        const double next = x - excess / fp;
        if (!(next < x))
            break;
        x = std::max(next, 0.0);
    }
    return std::sqrt(x);
}

struct Candidate
{
    double se = -1.0;
    double phase = 0.0;
    double alpha = 1.0;
    bool active = false;
    double shrink = 1.0;
};

// Coordinate-ascent sweeps over a fixed transmit covariance.
class SweepEngine
{
  public:
    SweepEngine(const ChannelPair &ch, const NoiseModel &noise, const PhaseCodebook &book,
                std::vector<char> capable, double budget, BudgetMode mode, const AOConfig &ao)
        : ch_(ch), noise_(noise), book_(book), capable_(std::move(capable)), budget_(budget), mode_(mode), ao_(ao),
          sigma2_(noise.receiver_noise()), sigma_r2_(noise.active_noise()), sigma_si2_(noise.sigma_si2_surface)
    {
    }

    void set_covariance(const CMat &q)
    {
        h1q_ = ch_.h1 * covariance_root(q);
        s_ = incident_powers(ch_.h1, q);
    }

    // One ascending pass. Returns the number of accepted moves.
    int sweep(CoeffProfile &p)
    {
        const int n_el = p.size();
        std::vector<char> active(static_cast<std::size_t>(n_el), 0);
        for (int n : p.active_set)
            active[static_cast<std::size_t>(n)] = 1;

        int moves = 0;
        for (int n = 0; n < n_el; ++n)
        {
            prepare(p, active, n);
            const auto i = static_cast<std::size_t>(n);
            const Candidate incumbent =
                evaluate(n, p.phases[i], active[i] ? p.amplitudes[i] : 1.0, active[i] != 0);
            Candidate best = incumbent;

            for (double phase : book_.values())
            {
                const Candidate passive = evaluate(n, phase, 1.0, false);
                if (improves(passive.se, best.se))
                    best = passive;
                if (capable_[i] && budget_ > 0.0)
                {
                    const Candidate amp = amplitude_search(n, phase);
                    if (improves(amp.se, best.se))
                        best = amp;
                }
            }
            if (!improves(best.se, incumbent.se))
                continue;

            ++moves;
            p.phases[i] = best.phase;
            p.amplitudes[i] = best.active ? best.alpha : 1.0;
            active[i] = best.active ? 1 : 0;
            if (best.shrink < 1.0)
                for (int m : others_)
                    p.amplitudes[static_cast<std::size_t>(m)] *= best.shrink;
        }

        p.active_set.clear();
        for (int n = 0; n < n_el; ++n)
            if (active[static_cast<std::size_t>(n)])
                p.active_set.push_back(n);
        return moves;
    }

  private:
    // Contributions of every element except n under the current profile.
    void prepare(const CoeffProfile &p, const std::vector<char> &active, int n)
    {
        const Eigen::Index nr = ch_.h2.rows();
        const Eigen::Index r = h1q_.cols();
        g_passive_ = CMat::Zero(nr, r);
        g_active_ = CMat::Zero(nr, r);
        c_rest_ = CMat::Identity(nr, nr) * sigma2_;
        others_.clear();
        terms_.clear();
        others_power_ = 0.0;
        for (int m = 0; m < p.size(); ++m)
        {
            if (m == n)
                continue;
            const auto j = static_cast<std::size_t>(m);
            const cdouble c = p.coefficient(m);
            if (active[j])
            {
                g_active_.noalias() += c * ch_.h2.col(m) * h1q_.row(m);
                const double a2 = p.amplitudes[j] * p.amplitudes[j];
                const LoopTerms t{a2, a2 * (s_[j] + sigma_r2_), a2 * sigma_si2_};
                const double out = t.drive / (1.0 - t.feedback);
                c_rest_.noalias() += a2 * (sigma_r2_ + sigma_si2_ * out) * ch_.h2.col(m) * ch_.h2.col(m).adjoint();
                others_.push_back(m);
                terms_.push_back(t);
                others_power_ += out;
            }
            else
            {
                g_passive_.noalias() += c * ch_.h2.col(m) * h1q_.row(m);
            }
        }
    }

    Candidate evaluate(int n, double phase, double alpha, bool is_active)
    {
        const auto i = static_cast<std::size_t>(n);
        Candidate cand;
        cand.phase = phase;
        cand.alpha = alpha;
        cand.active = is_active;

        double own = 0.0;
        if (is_active)
            own = element_output_power(alpha, s_[i], sigma_r2_, sigma_si2_);
        if (mode_ == BudgetMode::total && !terms_.empty() &&
            others_power_ + own > budget_ * (1.0 + budget_tolerance))
            cand.shrink = shrink_factor(terms_, budget_ - own);

        const double t = cand.shrink;
        const cdouble coeff = std::polar(is_active ? alpha : 1.0, phase);
        CMat y = g_passive_;
        y.noalias() += t * g_active_;
        y.noalias() += coeff * ch_.h2.col(n) * h1q_.row(n);

        CMat c;
        if (t == 1.0)
            c = c_rest_;
        else
        {
            const Eigen::Index nr = ch_.h2.rows();
            c = CMat::Identity(nr, nr) * sigma2_;
            const double x = t * t;
            for (std::size_t k = 0; k < terms_.size(); ++k)
            {
                const auto &lt = terms_[k];
                const double out = x * lt.drive / (1.0 - x * lt.feedback);
                const double share = x * lt.a2 * (sigma_r2_ + sigma_si2_ * out);
                c.noalias() += share * ch_.h2.col(others_[k]) * ch_.h2.col(others_[k]).adjoint();
            }
        }
        if (is_active)
        {
            const double share = alpha * alpha * (sigma_r2_ + sigma_si2_ * own);
            c.noalias() += share * ch_.h2.col(n) * ch_.h2.col(n).adjoint();
        }
        cand.se = whitened_rate(y, c);
        return cand;
    }

    // Coarse grid on [0, alpha_full] followed by golden-section refinement around the best
    // grid point. alpha_full is the amplitude at which element n alone uses the budget.
    Candidate amplitude_search(int n, double phase)
    {
        const auto i = static_cast<std::size_t>(n);
        const double alpha_full = amplitude_for_output_power(budget_, s_[i], sigma_r2_, sigma_si2_);
        const int grid = ao_.amplitude_grid;

        Candidate best;
        int best_j = 0;
        std::vector<double> nodes(static_cast<std::size_t>(grid));
        for (int j = 0; j < grid; ++j)
        {
            nodes[static_cast<std::size_t>(j)] = alpha_full * static_cast<double>(j) / static_cast<double>(grid - 1);
            const Candidate c = evaluate(n, phase, nodes[static_cast<std::size_t>(j)], true);
            if (j == 0 || c.se > best.se)
            {
                best = c;
                best_j = j;
            }
        }

        double lo = nodes[static_cast<std::size_t>(std::max(best_j - 1, 0))];
        double hi = nodes[static_cast<std::size_t>(std::min(best_j + 1, grid - 1))];
        constexpr double inv_phi = 0.61803398874989484820;
        double x1 = hi - inv_phi * (hi - lo);
        double x2 = lo + inv_phi * (hi - lo);
        Candidate f1 = evaluate(n, phase, x1, true);
        Candidate f2 = evaluate(n, phase, x2, true);
        for (int it = 0; it < ao_.golden_iters; ++it)
        {
            if (f1.se > best.se)
                best = f1;
            if (f2.se > best.se)
                best = f2;
            if (f1.se >= f2.se)
            {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = evaluate(n, phase, x1, true);
            }
            else
            {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = evaluate(n, phase, x2, true);
            }
        }
        if (f1.se > best.se)
            best = f1;
        if (f2.se > best.se)
            best = f2;
        return best;
    }

    const ChannelPair &ch_;
    const NoiseModel &noise_;
    const PhaseCodebook &book_;
    std::vector<char> capable_;
    double budget_;
    BudgetMode mode_;
    AOConfig ao_;
    double sigma2_;
    double sigma_r2_;
    double sigma_si2_;

    CMat h1q_;
    std::vector<double> s_;

    CMat g_passive_;
    CMat g_active_;
    CMat c_rest_;
    std::vector<int> others_;
    std::vector<LoopTerms> terms_;
    double others_power_ = 0.0;
};

CMat isotropic(int nt, double power)
{
    return CMat::Identity(nt, nt) * cdouble(power / nt, 0.0);
}

double evaluate_state(const ChannelPair &ch, const CoeffProfile &p, const CMat &q, const NoiseModel &noise,
                      double power)
{
    return spectral_efficiency(ch.h1, ch.h2, p, q, noise, power);
}

// Shrink active amplitudes until the profile meets the budget under incident powers s.
void fit_budget(CoeffProfile &p, std::span<const double> s, const NoiseModel &noise, double budget, BudgetMode mode)
{
    const double sigma_r2 = noise.active_noise();
    const double si = noise.sigma_si2_surface;
    if (mode == BudgetMode::per_element)
    {
        for (int n : p.active_set)
        {
            const auto i = static_cast<std::size_t>(n);
            const double cap = amplitude_for_output_power(budget, s[i], sigma_r2, si);
            if (p.amplitudes[i] > cap)
                p.amplitudes[i] = cap;
        }
        return;
    }
    std::vector<LoopTerms> terms;
    for (int n : p.active_set)
    {
        const auto i = static_cast<std::size_t>(n);
        const double a2 = p.amplitudes[i] * p.amplitudes[i];
        terms.push_back({a2, a2 * (s[i] + sigma_r2), a2 * si});
    }
    double total = 0.0;
    for (const auto &t : terms)
    {
        if (t.feedback >= 1.0)
        {
            total = std::numeric_limits<double>::infinity();
            break;
        }
        total += t.drive / (1.0 - t.feedback);
    }
    if (total <= budget * (1.0 + budget_tolerance))
        return;
    double x;
    if (std::isfinite(total))
        x = shrink_factor(terms, budget);
    else
    {
        // Pull every loop into the stable region first, then solve.
        double worst = 0.0;
        for (const auto &t : terms)
            worst = std::max(worst, t.feedback);
        const double pre = std::sqrt(0.5 / worst);
        for (int n : p.active_set)
            p.amplitudes[static_cast<std::size_t>(n)] *= pre;
        fit_budget(p, s, noise, budget, mode);
        return;
    }
    for (int n : p.active_set)
        p.amplitudes[static_cast<std::size_t>(n)] *= x;
}

struct RunSetup
{
    std::vector<char> capable; // elements allowed to be active
    std::vector<int> capable_list;
    double budget = 0.0;
    BudgetMode mode = BudgetMode::total;
};

// Activate every capable element with an equal share of the budget under q.
void activate_equal_share(CoeffProfile &p, const RunSetup &setup, std::span<const double> s, const NoiseModel &noise)
{
    if (setup.capable_list.empty() || setup.budget <= 0.0)
        return;
    const double share = setup.mode == BudgetMode::total
                             ? setup.budget / static_cast<double>(setup.capable_list.size())
                             : setup.budget;
    for (int n : setup.capable_list)
    {
        const auto i = static_cast<std::size_t>(n);
        p.amplitudes[i] = amplitude_for_output_power(share, s[i], noise.active_noise(), noise.sigma_si2_surface);
    }
    p.active_set = setup.capable_list;
}

OptState initial_state(const ChannelPair &ch, const NoiseModel &noise, double power,
                       const AOConfig &ao, const RunSetup &setup, const PhaseCodebook &book, int run,
                       const OptState *init)
{
    OptState st;
    const int nt = ch.n_tx();
    if (run == 0 && init)
    {
        st = *init;
        if (st.q.size() == 0)
            st.q = isotropic(nt, power);
        if (st.profile.size() != ch.n_elements())
            throw std::invalid_argument("initial profile size does not match the channel");
    }
    else
    {
        st.profile = CoeffProfile::passive(ch.n_elements());
        const bool random = run > 0 || ao.init == InitKind::random_phase;
        if (random)
        {
            Rng rng(child_seed(ao.seed, static_cast<std::uint64_t>(run)));
            std::uniform_int_distribution<std::size_t> pick(0, book.size() - 1);
            for (auto &ph : st.profile.phases)
                ph = book[pick(rng)];
        }
        st.q = isotropic(nt, power);
        activate_equal_share(st.profile, setup, incident_powers(ch.h1, st.q), noise);
    }
    const std::vector<double> s = incident_powers(ch.h1, st.q);
    fit_budget(st.profile, s, noise, setup.budget, setup.mode);
    st.se = evaluate_state(ch, st.profile, st.q, noise, power);
    return st;
}

bool converged_step(double prev, double now, double tol)
{
    return (now - prev) <= tol * std::max(std::abs(prev), std::numeric_limits<double>::min());
}

OptResult run_ao(const ChannelPair &ch, const SurfaceConfig &cfg, const NoiseModel &noise, const PowerModel &pm,
                 const AOConfig &ao, const RunSetup &setup, const OptState *init)
{
    ao.validate();
    noise.validate();
    if (ch.n_elements() != cfg.n_elements)
        throw std::invalid_argument("channel element count " + std::to_string(ch.n_elements()) +
                                    " does not match N = " + std::to_string(cfg.n_elements));
    const PhaseCodebook book(cfg.phase_bits);
    const double power = pm.bs_tx_power;
    SurfaceConfig budget_cfg = cfg;
    budget_cfg.active_power_budget = setup.budget;
    budget_cfg.budget_mode = setup.mode;

    OptResult best;
    bool have_best = false;
    for (int run = 0; run <= ao.restarts; ++run)
    {
        OptState st = initial_state(ch, noise, power, ao, setup, book, run, init);
        OptResult res;
        res.trace.push_back(st.se);

        QUpdate qu = guarded_q_update(st, ch, noise, budget_cfg, power);
        st = qu.state;
        res.trace.push_back(st.se);

        SweepEngine engine(ch, noise, book, setup.capable, setup.budget, setup.mode, ao);
        for (int it = 1; it <= ao.max_outer_iters; ++it)
        {
            const double prev = st.se;
            engine.set_covariance(st.q);
            engine.sweep(st.profile);
            st.se = evaluate_state(ch, st.profile, st.q, noise, power);
            st = guarded_q_update(st, ch, noise, budget_cfg, power).state;
            res.trace.push_back(st.se);
            res.iterations = it;
            if (converged_step(prev, st.se, ao.rel_tolerance))
            {
                res.converged = true;
                break;
            }
        }
        res.profile = st.profile;
        res.q = st.q;
        res.se = st.se;
        res.active_power = radiated_active_power(res.profile, ch, res.q, noise);
        if (!have_best || res.se > best.se)
        {
            best = std::move(res);
            have_best = true;
        }
    }
    return best;
}

RunSetup setup_for(const SurfaceConfig &cfg, std::vector<int> capable_list)
{
    RunSetup s;
    s.capable.assign(static_cast<std::size_t>(cfg.n_elements), 0);
    for (int n : capable_list)
        s.capable[static_cast<std::size_t>(n)] = 1;
    s.capable_list = std::move(capable_list);
    s.budget = cfg.active_power_budget;
    s.mode = cfg.budget_mode;
    return s;
}

} // namespace

void AOConfig::validate() const
{
    if (!(rel_tolerance > 0.0))
        throw std::invalid_argument("AOConfig: tolerance must be > 0");
    if (amplitude_grid < 2)
        throw std::invalid_argument("AOConfig: amplitude grid needs at least 2 points");
    if (max_outer_iters < 1 || restarts < 0 || golden_iters < 0)
        throw std::invalid_argument("AOConfig: iteration counts must be positive");
}

double radiated_active_power(const CoeffProfile &p, const ChannelPair &channels, const CMat &q,
                             const NoiseModel &noise)
{
    if (p.active_set.empty())
        return 0.0;
    const std::vector<double> s = incident_powers(channels.h1, q);
    double total = 0.0;
    for (int n : p.active_set)
        total += element_output_power(p.amplitudes[static_cast<std::size_t>(n)], s[static_cast<std::size_t>(n)],
                                      noise.active_noise(), noise.sigma_si2_surface);
    return total;
}

QUpdate guarded_q_update(const OptState &current, const ChannelPair &channels, const NoiseModel &noise,
                         const SurfaceConfig &cfg, double bs_power)
{
    QUpdate out{current, false};
    const std::vector<double> s_prev = incident_powers(channels.h1, current.q);
    const CMat c = noise_covariance(channels.h2, current.profile, s_prev, noise);
    const CMat g = channels.h2 * current.profile.coefficients().asDiagonal() * channels.h1;
    const WaterFilling wf = water_filling(g, c, bs_power);
    if (wf.zero_channel)
        return out;

    OptState cand;
    cand.q = wf.covariance;
    cand.profile = current.profile;
    fit_budget(cand.profile, incident_powers(channels.h1, cand.q), noise, cfg.active_power_budget, cfg.budget_mode);
    cand.se = spectral_efficiency(channels.h1, channels.h2, cand.profile, cand.q, noise, bs_power);
    if (cand.se >= current.se)
    {
        out.state = std::move(cand);
        out.accepted = true;
    }
    return out;
}

OptResult optimize_passive(const ChannelPair &channels, const SurfaceConfig &cfg, const NoiseModel &noise,
                           const PowerModel &pm, const AOConfig &ao, const OptState *init)
{
    cfg.validate();
    SurfaceConfig passive = cfg;
    passive.n_active_chains = 0;
    passive.active_indices.clear();
    RunSetup setup = setup_for(passive, {});
    if (init && !init->profile.active_set.empty())
        throw std::invalid_argument("optimize_passive: initial profile has active elements");
    return run_ao(channels, passive, noise, pm, ao, setup, init);
}

OptResult optimize_fixed_hrris(const ChannelPair &channels, const SurfaceConfig &cfg, const NoiseModel &noise,
                               const PowerModel &pm, const AOConfig &ao, const OptState *init)
{
    cfg.validate();
    std::vector<int> capable = cfg.fixed_indices();
    if (capable.empty() || cfg.active_power_budget <= 0.0)
    {
        // No powered RF-PA chain: every element reflects passively.
        if (init && !init->profile.active_set.empty())
        {
            OptState passive_init = *init;
            passive_init.profile = CoeffProfile::passive(cfg.n_elements);
            passive_init.profile.phases = init->profile.phases;
            return optimize_passive(channels, cfg, noise, pm, ao, &passive_init);
        }
        return optimize_passive(channels, cfg, noise, pm, ao, init);
    }
    if (init)
        for (int n : init->profile.active_set)
            if (!std::binary_search(capable.begin(), capable.end(), n))
                throw std::invalid_argument("optimize_fixed_hrris: initial active element " + std::to_string(n) +
                                            " is not in the fixed set");
    return run_ao(channels, cfg, noise, pm, ao, setup_for(cfg, std::move(capable)), init);
}

OptResult dynamic_unrestricted(const ChannelPair &channels, const SurfaceConfig &cfg, const NoiseModel &noise,
                               const PowerModel &pm, const AOConfig &ao, const OptState *init)
{
    cfg.validate();
    std::vector<int> all(static_cast<std::size_t>(cfg.n_elements));
    std::iota(all.begin(), all.end(), 0);
    RunSetup setup = setup_for(cfg, all);

    if (!init)
        return run_ao(channels, cfg, noise, pm, ao, setup, nullptr);

    // Keep the warm phases and covariance, but start from the equal-share activation.
    OptState start = *init;
    if (start.q.size() == 0)
        start.q = isotropic(channels.n_tx(), pm.bs_tx_power);
    std::fill(start.profile.amplitudes.begin(), start.profile.amplitudes.end(), 1.0);
    activate_equal_share(start.profile, setup, incident_powers(channels.h1, start.q), noise);
    return run_ao(channels, cfg, noise, pm, ao, setup, &start);
}

std::vector<int> select_active(std::span<const double> amplitudes, int k)
{
    std::vector<int> candidates;
    for (std::size_t n = 0; n < amplitudes.size(); ++n)
        if (amplitudes[n] > 1.0)
            candidates.push_back(static_cast<int>(n));
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
        return amplitudes[static_cast<std::size_t>(a)] > amplitudes[static_cast<std::size_t>(b)];
    });
    if (static_cast<int>(candidates.size()) > std::max(k, 0))
        candidates.resize(static_cast<std::size_t>(std::max(k, 0)));
    std::sort(candidates.begin(), candidates.end());
    return candidates;
}

OptResult dynamic_refine(const OptResult &unrestricted, const ChannelPair &channels, const SurfaceConfig &cfg,
                         const NoiseModel &noise, const PowerModel &pm, const AOConfig &ao,
                         const OptState *passive_init)
{
    std::vector<double> amps(unrestricted.profile.amplitudes.size(), 1.0);
    for (int n : unrestricted.profile.active_set)
        amps[static_cast<std::size_t>(n)] = unrestricted.profile.amplitudes[static_cast<std::size_t>(n)];
    const std::vector<int> chosen = select_active(amps, cfg.n_active_chains);

    SurfaceConfig fixed = cfg;
    fixed.architecture = Architecture::fixed;
    fixed.n_active_chains = static_cast<int>(chosen.size());
    fixed.active_indices = chosen;

    if (chosen.empty())
    {
        OptResult r = optimize_passive(channels, fixed, noise, pm, ao, passive_init);
        r.iterations += unrestricted.iterations;
        return r;
    }

    OptState start;
    start.profile = unrestricted.profile;
    for (std::size_t n = 0; n < amps.size(); ++n)
        if (!std::binary_search(chosen.begin(), chosen.end(), static_cast<int>(n)))
            start.profile.amplitudes[n] = 1.0;
    start.profile.active_set = chosen;
    start.q = unrestricted.q;
    start.se = spectral_efficiency(channels.h1, channels.h2, start.profile, start.q, noise, pm.bs_tx_power);

    OptResult r = optimize_fixed_hrris(channels, fixed, noise, pm, ao, &start);
    if (passive_init && !passive_init->profile.active_set.empty())
        throw std::invalid_argument("dynamic_refine: passive start must have no active elements");
    if (passive_init)
    {
        OptState alt = *passive_init;
        alt.profile.active_set = chosen;
        OptResult r2 = optimize_fixed_hrris(channels, fixed, noise, pm, ao, &alt);
        if (r2.se > r.se)
        {
            r2.iterations += r.iterations;
            r = std::move(r2);
        }
        else
            r.iterations += r2.iterations;
    }
    r.iterations += unrestricted.iterations;
    return r;
}

OptResult optimize_dynamic_hrris(const ChannelPair &channels, const SurfaceConfig &cfg, const NoiseModel &noise,
                                 const PowerModel &pm, const AOConfig &ao, const OptState *init)
{
    cfg.validate();
    if (cfg.n_active_chains < 1 || cfg.active_power_budget <= 0.0)
        return optimize_passive(channels, cfg, noise, pm, ao, init);
    const OptResult phase1 = dynamic_unrestricted(channels, cfg, noise, pm, ao, init);
    return dynamic_refine(phase1, channels, cfg, noise, pm, ao, init);
}

OptResult brute_force_oracle(const ChannelPair &channels, const SurfaceConfig &cfg, const NoiseModel &noise,
                             const PowerModel &pm, int amplitude_grid)
{
    cfg.validate();
    const int n_el = channels.n_elements();
    if (n_el != cfg.n_elements)
        throw std::invalid_argument("brute_force_oracle: channel and config disagree on N");
    if (n_el > 6)
        throw SearchSpaceTooLarge("brute_force_oracle: N = " + std::to_string(n_el) + " exceeds 6");
    if (amplitude_grid < 2)
        throw std::invalid_argument("brute_force_oracle: amplitude grid needs at least 2 points");

    const PhaseCodebook book(cfg.phase_bits);
    const std::vector<int> capable =
        cfg.active_power_budget > 0.0 ? cfg.fixed_indices() : std::vector<int>{};
    const double phase_space = std::pow(static_cast<double>(book.size()), n_el);
    const double amp_space = std::pow(static_cast<double>(amplitude_grid + 1), static_cast<double>(capable.size()));
    if (phase_space * amp_space > 1e7)
        throw SearchSpaceTooLarge("brute_force_oracle: search space of " + std::to_string(phase_space * amp_space) +
                                  " points exceeds 1e7");

    const double power = pm.bs_tx_power;
    const int nt = channels.n_tx();
    const auto n_phase = static_cast<std::uint64_t>(phase_space);
    const auto n_amp = static_cast<std::uint64_t>(amp_space);
    const auto opts = static_cast<std::uint64_t>(amplitude_grid + 1);

    OptResult best;
    best.se = -1.0;
    CoeffProfile p = CoeffProfile::passive(n_el);
    for (std::uint64_t pi = 0; pi < n_phase; ++pi)
    {
        std::uint64_t code = pi;
        for (int n = 0; n < n_el; ++n)
        {
            p.phases[static_cast<std::size_t>(n)] = book[code % book.size()];
            code /= book.size();
        }
        for (std::uint64_t ai = 0; ai < n_amp; ++ai)
        {
            // Option 0 = passive reflection, option j >= 1 = active at fraction (j-1)/(grid-1).
            std::vector<int> option(capable.size());
            std::uint64_t ac = ai;
            for (std::size_t k = 0; k < capable.size(); ++k)
            {
                option[k] = static_cast<int>(ac % opts);
                ac /= opts;
            }
            p.active_set.clear();
            std::fill(p.amplitudes.begin(), p.amplitudes.end(), 1.0);
            for (std::size_t k = 0; k < capable.size(); ++k)
                if (option[k] > 0)
                    p.active_set.push_back(capable[k]);

            const CMat g = channels.h2 * p.coefficients().asDiagonal() * channels.h1;
            if (p.active_set.empty())
            {
                const CMat c = CMat::Identity(channels.n_rx(), channels.n_rx()) * noise.receiver_noise();
                const WaterFilling wf = water_filling(g, c, power);
                const CMat q = wf.zero_channel ? isotropic(nt, power) : wf.covariance;
                const double se = spectral_efficiency(channels.h1, channels.h2, p, q, noise, power);
                if (se > best.se)
                {
                    best.se = se;
                    best.profile = p;
                    best.q = q;
                }
                continue;
            }

            // Active elements couple q and the noise; follow a short fixed point from isotropic.
            CMat q = isotropic(nt, power);
            for (int it = 0; it < 4; ++it)
            {
                const std::vector<double> s = incident_powers(channels.h1, q);
                CoeffProfile trial = p;
                for (std::size_t k = 0; k < capable.size(); ++k)
                {
                    if (option[k] == 0)
                        continue;
                    const auto i = static_cast<std::size_t>(capable[k]);
                    const double full = amplitude_for_output_power(cfg.active_power_budget, s[i],
                                                                   noise.active_noise(), noise.sigma_si2_surface);
                    trial.amplitudes[i] =
                        full * static_cast<double>(option[k] - 1) / static_cast<double>(amplitude_grid - 1);
                }
                if (!budget_check(trial, s, noise, cfg).feasible)
                    break;
                const double se = spectral_efficiency(channels.h1, channels.h2, trial, q, noise, power);
                if (se > best.se)
                {
                    best.se = se;
                    best.profile = trial;
                    best.q = q;
                }
                const CMat gt = channels.h2 * trial.coefficients().asDiagonal() * channels.h1;
                const WaterFilling wf = water_filling(gt, noise_covariance(channels.h2, trial, s, noise), power);
                if (wf.zero_channel)
                    break;
                q = wf.covariance;
            }
        }
    }
    best.trace = {best.se};
    best.converged = true;
    best.active_power = radiated_active_power(best.profile, channels, best.q, noise);
    return best;
}

} // namespace hrris
