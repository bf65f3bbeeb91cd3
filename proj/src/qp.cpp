#include "lipnav/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lipnav::qp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kRegularization = 1e-9;

/// One-sided normalized constraint a . u >= b with ||a|| = 1.
struct OneSided {
    Eigen::VectorXd a;
    double b = 0.0;
    int row = 0;
    Side side = Side::Lower;
    double scale = 1.0;  // original coefficient norm
};

}  // namespace

QpSolution solve(const DenseQP& qp, int max_iterations, const std::vector<ActiveConstraint>& warm_start) {
    const int n = qp.dim();
    if (n <= 0 || qp.hessian.rows() != n || qp.hessian.cols() != n) {
        throw std::invalid_argument("qp dimensions are inconsistent");
    }
    const double h_scale = std::max(1.0, qp.hessian.cwiseAbs().maxCoeff());
    if ((qp.hessian - qp.hessian.transpose()).cwiseAbs().maxCoeff() > 1e-12 * h_scale) {
        throw std::invalid_argument("qp hessian is not symmetric");
    }

    Eigen::MatrixXd G = 0.5 * (qp.hessian + qp.hessian.transpose());
    G.diagonal().array() += kRegularization;
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("qp hessian is not positive definite");
    }

    // J = L^-T spans the metric inverse; columns q..n-1 span the null space
    // of the active normals in the G metric.
    Eigen::MatrixXd J = llt.matrixU().solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::VectorXd x = llt.solve(-qp.gradient);
    // c1 * c2 estimates cond(G); feasibility is judged against the noise
    // floor this conditioning implies.
    const double c1 = G.trace();
    const double c2 = J.diagonal().sum();

    // Expand two-sided rows into normalized one-sided constraints.
    const int n_rows = static_cast<int>(qp.rows.size());
    std::vector<OneSided> cons;
    cons.reserve(2 * static_cast<std::size_t>(n_rows));
    std::vector<int> lower_index(static_cast<std::size_t>(n_rows), -1);
    std::vector<int> upper_index(static_cast<std::size_t>(n_rows), -1);
    bool zero_row_conflict = false;
    for (int i = 0; i < n_rows; ++i) {
        const constraints::LinearRow& row = qp.rows[static_cast<std::size_t>(i)];
        if (row.coeffs.size() != n) {
            throw std::invalid_argument("qp row length mismatch: " + row.label);
        }
        if (!(row.lower <= row.upper)) {
            throw std::invalid_argument("qp row bounds crossed: " + row.label);
        }
        const double nrm = row.coeffs.norm();
        if (nrm < 1e-14) {
            if (row.lower > 1e-12 || row.upper < -1e-12) {
                zero_row_conflict = true;
            }
            continue;
        }
        if (std::isfinite(row.lower)) {
            lower_index[static_cast<std::size_t>(i)] = static_cast<int>(cons.size());
            cons.push_back({row.coeffs / nrm, row.lower / nrm, i, Side::Lower, nrm});
        }
        if (std::isfinite(row.upper)) {
            upper_index[static_cast<std::size_t>(i)] = static_cast<int>(cons.size());
            cons.push_back({-row.coeffs / nrm, -row.upper / nrm, i, Side::Upper, nrm});
        }
    }
    const int m = static_cast<int>(cons.size());

    std::vector<int> hints;
    hints.reserve(warm_start.size());
    for (const ActiveConstraint& h : warm_start) {
        if (h.row < 0 || h.row >= n_rows) {
            continue;  // stale hint from a differently shaped problem
        }
        const int idx = h.side == Side::Lower ? lower_index[static_cast<std::size_t>(h.row)]
                                              : upper_index[static_cast<std::size_t>(h.row)];
        if (idx >= 0) {
            hints.push_back(idx);
        }
    }

    double b_scale = 1.0;
    for (const OneSided& c : cons) {
        b_scale = std::max(b_scale, std::abs(c.b));
    }
    const double feas_tol = 1e-10 * b_scale;

    // Working set: R holds the triangular factor of the active normals in
    // the J basis, lam the corresponding multipliers.
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
    double r_norm = 1.0;
    std::vector<int> active;
    Eigen::VectorXd lam = Eigen::VectorXd::Zero(n);
    std::vector<char> is_active(static_cast<std::size_t>(m), 0);
    int iterations = 0;
    Status status = Status::Optimal;

    auto drop_at = [&](int pos) {
        const int q = static_cast<int>(active.size());
        is_active[static_cast<std::size_t>(active[static_cast<std::size_t>(pos)])] = 0;
        for (int i = pos; i < q - 1; ++i) {
            active[static_cast<std::size_t>(i)] = active[static_cast<std::size_t>(i + 1)];
            lam(i) = lam(i + 1);
            R.col(i) = R.col(i + 1);
        }
        active.pop_back();
        lam(q - 1) = 0.0;
        R.col(q - 1).setZero();
        const int qq = q - 1;
        for (int j = pos; j < qq; ++j) {
            double cc = R(j, j);
            double ss = R(j + 1, j);
            const double h = std::hypot(cc, ss);
            if (h < kEps) {
                continue;
            }
            cc /= h;
            ss /= h;
            R(j + 1, j) = 0.0;
            if (cc < 0.0) {
                R(j, j) = -h;
                cc = -cc;
                ss = -ss;
            } else {
                R(j, j) = h;
            }
            const double xny = ss / (1.0 + cc);
            for (int k = j + 1; k < qq; ++k) {
                const double t1 = R(j, k);
                const double t2 = R(j + 1, k);
                R(j, k) = t1 * cc + t2 * ss;
                R(j + 1, k) = xny * (t1 + R(j, k)) - t2;
            }
            for (int k = 0; k < n; ++k) {
                const double t1 = J(k, j);
                const double t2 = J(k, j + 1);
                J(k, j) = t1 * cc + t2 * ss;
                J(k, j + 1) = xny * (J(k, j) + t1) - t2;
            }
        }
    };

    auto add_from = [&](Eigen::VectorXd& d) -> bool {
        const int q = static_cast<int>(active.size());
        for (int j = n - 1; j >= q + 1; --j) {
            double cc = d(j - 1);
            double ss = d(j);
            const double h = std::hypot(cc, ss);
            if (h < kEps) {
                continue;
            }
            d(j) = 0.0;
            cc /= h;
            ss /= h;
            if (cc < 0.0) {
                cc = -cc;
                ss = -ss;
                d(j - 1) = -h;
            } else {
                d(j - 1) = h;
            }
            const double xny = ss / (1.0 + cc);
            for (int k = 0; k < n; ++k) {
                const double t1 = J(k, j - 1);
                const double t2 = J(k, j);
                J(k, j - 1) = t1 * cc + t2 * ss;
                J(k, j) = xny * (t1 + J(k, j - 1)) - t2;
            }
        }
        R.col(q).head(q + 1) = d.head(q + 1);
        if (std::abs(d(q)) <= kEps * r_norm) {
            return false;
        }
        r_norm = std::max(r_norm, std::abs(d(q)));
        return true;
    };

    if (zero_row_conflict) {
        status = Status::Infeasible;
    }

    Eigen::VectorXd s(m);
    while (status == Status::Optimal) {
        double psi = 0.0;
        for (int i = 0; i < m; ++i) {
            s(i) = cons[static_cast<std::size_t>(i)].a.dot(x) - cons[static_cast<std::size_t>(i)].b;
            psi += std::min(0.0, s(i));
        }
        if (std::abs(psi) <= static_cast<double>(m) * kEps * c1 * c2 * 100.0) {
            break;  // aggregate violation within the factorization noise floor
        }
        int ip = -1;
        for (const int idx : hints) {
            if (!is_active[static_cast<std::size_t>(idx)] && s(idx) < -feas_tol) {
                ip = idx;
                break;
            }
        }
        if (ip < 0) {
            double worst = -feas_tol;
            for (int i = 0; i < m; ++i) {
                if (!is_active[static_cast<std::size_t>(i)] && s(i) < worst) {
                    worst = s(i);
                    ip = i;
                }
            }
        }
        if (ip < 0) {
            break;  // all constraints satisfied
        }

        const Eigen::VectorXd& np = cons[static_cast<std::size_t>(ip)].a;
        double s_ip = s(ip);
        double lam_incoming = 0.0;
        bool resolved = false;
        while (!resolved) {
            if (++iterations > max_iterations) {
                status = Status::MaxIterations;
                break;
            }
            const int q = static_cast<int>(active.size());
            Eigen::VectorXd d = J.transpose() * np;
            const Eigen::VectorXd z = J.rightCols(n - q) * d.tail(n - q);
            Eigen::VectorXd r(q);
            for (int i = q - 1; i >= 0; --i) {
                double sum = d(i);
                for (int j = i + 1; j < q; ++j) {
                    sum -= R(i, j) * r(j);
                }
                r(i) = sum / R(i, i);
            }

            double t1 = kInf;
            int drop_pos = -1;
            for (int k = 0; k < q; ++k) {
                if (r(k) > 0.0) {
                    const double ratio = lam(k) / r(k);
                    if (ratio < t1) {
                        t1 = ratio;
                        drop_pos = k;
                    }
                }
            }
            double t2 = kInf;
            double ztnp = 0.0;
            if (z.squaredNorm() > kEps) {
                ztnp = z.dot(np);
                t2 = -s_ip / ztnp;
            }
            const double t = std::min(t1, t2);
            if (t >= kInf) {
                status = Status::Infeasible;  // dual unbounded
                break;
            }
            if (t2 >= kInf) {
                // dual step only: relax the blocking multiplier and retry
                for (int k = 0; k < q; ++k) {
                    lam(k) -= t * r(k);
                }
                lam_incoming += t;
                drop_at(drop_pos);
                continue;
            }
            x += t * z;
            for (int k = 0; k < q; ++k) {
                lam(k) -= t * r(k);
            }
            lam_incoming += t;
            if (std::abs(t - t2) < kEps) {
                if (!add_from(d)) {
                    // active normals numerically dependent; give up honestly
                    status = Status::MaxIterations;
                    break;
                }
                active.push_back(ip);
                is_active[static_cast<std::size_t>(ip)] = 1;
                lam(q) = lam_incoming;
                resolved = true;
            } else {
                drop_at(drop_pos);
                s_ip = np.dot(x) - cons[static_cast<std::size_t>(ip)].b;
            }
        }
    }

    QpSolution out;
    out.u_star = x;
    out.status = status;
    out.iterations = iterations;
    out.objective = 0.5 * x.dot(qp.hessian * x) + qp.gradient.dot(x);
    out.active_set.reserve(active.size());
    out.multipliers.resize(static_cast<Eigen::Index>(active.size()));
    for (std::size_t pos = 0; pos < active.size(); ++pos) {
        const OneSided& c = cons[static_cast<std::size_t>(active[pos])];
        out.active_set.push_back({c.row, c.side});
        out.multipliers(static_cast<Eigen::Index>(pos)) = lam(static_cast<Eigen::Index>(pos)) / c.scale;
    }

    // KKT certificate for the regularized problem actually solved.
    Eigen::VectorXd grad = G * x + qp.gradient;
    double comp = 0.0;
    for (std::size_t pos = 0; pos < out.active_set.size(); ++pos) {
        const ActiveConstraint& ac = out.active_set[pos];
        const constraints::LinearRow& row = qp.rows[static_cast<std::size_t>(ac.row)];
        const double mult = out.multipliers(static_cast<Eigen::Index>(pos));
        const double val = row.coeffs.dot(x);
        if (ac.side == Side::Lower) {
            grad -= mult * row.coeffs;
            comp = std::max(comp, std::abs(mult * (val - row.lower)));
        } else {
            grad += mult * row.coeffs;
            comp = std::max(comp, std::abs(mult * (val - row.upper)));
        }
    }
    double feas = 0.0;
    for (const constraints::LinearRow& row : qp.rows) {
        const double val = row.coeffs.dot(x);
        if (std::isfinite(row.lower)) {
            feas = std::max(feas, row.lower - val);
        }
        if (std::isfinite(row.upper)) {
            feas = std::max(feas, val - row.upper);
        }
    }
    out.kkt_residual = std::max({grad.lpNorm<Eigen::Infinity>(), feas, comp});
    return out;
}

SlackSolution solve_with_slack(const DenseQP& qp, const std::vector<int>& soft_rows, double penalty,
                               int max_iterations, const std::vector<ActiveConstraint>& warm_start) {
    if (!(penalty > 0.0)) {
        throw std::invalid_argument("slack penalty must be positive");
    }
    const int n = qp.dim();
    const int n_rows = static_cast<int>(qp.rows.size());
    const int ns = static_cast<int>(soft_rows.size());

    std::vector<int> slack_of_row(static_cast<std::size_t>(n_rows), -1);
    for (int j = 0; j < ns; ++j) {
        const int i = soft_rows[static_cast<std::size_t>(j)];
        if (i < 0 || i >= n_rows) {
            throw std::invalid_argument("soft row index out of range");
        }
        if (slack_of_row[static_cast<std::size_t>(i)] >= 0) {
            throw std::invalid_argument("duplicate soft row index");
        }
        if (std::isfinite(qp.rows[static_cast<std::size_t>(i)].upper)) {
            throw std::invalid_argument("soft rows must be one-sided (upper = +inf): " +
                                        qp.rows[static_cast<std::size_t>(i)].label);
        }
        slack_of_row[static_cast<std::size_t>(i)] = j;
    }

    // Augment with one nonnegative slack per soft row. The linear term
    // makes the penalty exact (slacks vanish whenever the soft rows are
    // satisfiable and multipliers stay below `penalty`); the quadratic
    // term keeps the hessian PD and, scaled by `penalty`, places the
    // unconstrained slack minimum at -1/2 so iterates never traverse
    // penalty-sized magnitudes.
    DenseQP aug;
    aug.hessian = Eigen::MatrixXd::Zero(n + ns, n + ns);
    aug.hessian.topLeftCorner(n, n) = qp.hessian;
    for (int j = 0; j < ns; ++j) {
        aug.hessian(n + j, n + j) = 2.0 * penalty;
    }
    aug.gradient.resize(n + ns);
    aug.gradient.head(n) = qp.gradient;
    aug.gradient.tail(ns).setConstant(penalty);
    aug.rows.reserve(static_cast<std::size_t>(n_rows + ns));
    for (int i = 0; i < n_rows; ++i) {
        const constraints::LinearRow& row = qp.rows[static_cast<std::size_t>(i)];
        constraints::LinearRow r2;
        r2.coeffs = Eigen::VectorXd::Zero(n + ns);
        r2.coeffs.head(n) = row.coeffs;
        const int j = slack_of_row[static_cast<std::size_t>(i)];
        if (j >= 0) {
            r2.coeffs(n + j) = 1.0;
        }
        r2.lower = row.lower;
        r2.upper = row.upper;
        r2.label = row.label;
        aug.rows.push_back(std::move(r2));
    }
    for (int j = 0; j < ns; ++j) {
        constraints::LinearRow r2;
        r2.coeffs = Eigen::VectorXd::Zero(n + ns);
        r2.coeffs(n + j) = 1.0;
        r2.lower = 0.0;
        r2.upper = std::numeric_limits<double>::infinity();
        r2.label = "slack[" + std::to_string(j) + "]";
        aug.rows.push_back(std::move(r2));
    }

    QpSolution sol = solve(aug, max_iterations, warm_start);

    SlackSolution out;
    out.slacks = sol.u_star.tail(ns).cwiseMax(0.0);
    out.max_slack = ns > 0 ? out.slacks.maxCoeff() : 0.0;
    const Eigen::VectorXd u = sol.u_star.head(n).eval();
    sol.u_star = u;
    sol.objective = 0.5 * u.dot(qp.hessian * u) + qp.gradient.dot(u);
    out.solution = std::move(sol);
    return out;
}

}  // namespace lipnav::qp
