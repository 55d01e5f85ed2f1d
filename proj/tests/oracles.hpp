#pragma once

// Reference computations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                      double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double eps = 1e-13) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), eps, 60);
}

/// Integral of `pdf` over [x0, inf) through x = x0 + s / (1 - s).
inline double upper_tail(const std::function<double(double)>& pdf, double x0) {
    auto g = [&](double s) {
        if (s >= 1.0) return 0.0;
        const double x = x0 + s / (1.0 - s);
        return pdf(x) / ((1.0 - s) * (1.0 - s));
    };
    // Split so the adaptive rule sees the bulk of the mass.
    double total = 0.0;
    const double cuts[] = {0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0};
    for (int i = 0; i + 1 < 7; ++i) total += integrate(g, cuts[i], cuts[i + 1]);
    return total;
}

inline double f_pdf(double x, double d1, double d2) {
    if (x <= 0.0) return 0.0;
    const double logc = std::lgamma((d1 + d2) / 2) - std::lgamma(d1 / 2) - std::lgamma(d2 / 2) +
                        d1 / 2 * std::log(d1 / d2);
    return std::exp(logc + (d1 / 2 - 1) * std::log(x) - (d1 + d2) / 2 * std::log1p(d1 * x / d2));
}

inline double chi2_pdf(double x, double k) {
    if (x <= 0.0) return 0.0;
    return std::exp((k / 2 - 1) * std::log(x) - x / 2 - k / 2 * std::log(2.0) - std::lgamma(k / 2));
}

inline double f_tail(double f, double d1, double d2) {
    return upper_tail([=](double x) { return f_pdf(x, d1, d2); }, f);
}

inline double chi2_tail(double x, double k) {
    return upper_tail([=](double t) { return chi2_pdf(t, k); }, x);
}

struct Counts {
    int tp, fp, fn;
    double precision, recall, f1;
};

/// Set-difference scoring over directed non-self edges.
inline Counts score(const std::set<std::pair<std::string, std::string>>& predicted,
                    const std::set<std::pair<std::string, std::string>>& truth) {
    std::set<std::pair<std::string, std::string>> p;
    for (const auto& e : predicted) {
        if (e.first != e.second) p.insert(e);
    }
    std::vector<std::pair<std::string, std::string>> inter, p_only, t_only;
    std::set_intersection(p.begin(), p.end(), truth.begin(), truth.end(), std::back_inserter(inter));
    std::set_difference(p.begin(), p.end(), truth.begin(), truth.end(), std::back_inserter(p_only));
    std::set_difference(truth.begin(), truth.end(), p.begin(), p.end(), std::back_inserter(t_only));
    Counts c{static_cast<int>(inter.size()), static_cast<int>(p_only.size()), static_cast<int>(t_only.size()), 0, 0, 0};
    if (c.tp + c.fp) c.precision = double(c.tp) / (c.tp + c.fp);
    if (c.tp + c.fn) c.recall = double(c.tp) / (c.tp + c.fn);
    if (c.precision + c.recall > 0) c.f1 = 2 * c.precision * c.recall / (c.precision + c.recall);
    return c;
}

/// Mean F1 over every non-self digraph on `names` against `truth`, each graph equally likely.
inline double expected_random_f1(const std::vector<std::string>& names,
                                 const std::set<std::pair<std::string, std::string>>& truth) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& a : names) {
        for (const auto& b : names) {
            if (a != b) pairs.emplace_back(a, b);
        }
    }
    const unsigned long graphs = 1ul << pairs.size();
    double sum = 0.0;
    for (unsigned long m = 0; m < graphs; ++m) {
        std::set<std::pair<std::string, std::string>> g;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            if (m >> k & 1ul) g.insert(pairs[k]);
        }
        sum += score(g, truth).f1;
    }
    return sum / static_cast<double>(graphs);
}

/// Benjamini-Hochberg by direct search for the largest passing rank.
inline std::vector<std::size_t> bh(const std::vector<double>& p, double alpha) {
    const std::size_t m = p.size();
    std::vector<double> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    double cutoff = -1.0;
    for (std::size_t k = 1; k <= m; ++k) {
        if (sorted[k - 1] <= alpha * static_cast<double>(k) / static_cast<double>(m)) cutoff = sorted[k - 1];
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < m; ++i) {
        if (p[i] <= cutoff) out.push_back(i);
    }
    return out;
}

}  // namespace oracle
