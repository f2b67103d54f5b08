/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qps/protocols.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qps {

ProjectedEnsemble project_ensemble(const StateVector& state,
                                   const std::vector<Index>& measured_qubits) {
    const Dims& dims = state.dims();
    const Index n = Index(dims.size());
    const Index full = state.dim();
    for (Index q : measured_qubits)
        if (q < 0 || q >= n) throw DimensionError("project_ensemble: qubit index out of range");

    std::vector<Index> stride(n, 1);
    for (Index k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * dims[k + 1];

    Index n_outcomes = 1;
    for (Index q : measured_qubits) n_outcomes *= dims[q];

    auto outcome_of = [&](Index flat) {
        Index o = 0;
        for (Index q : measured_qubits) o = o * dims[q] + (flat / stride[q]) % dims[q];
        return o;
    };

    std::vector<double> probs(n_outcomes, 0.0);
    for (Index i = 0; i < full; ++i) probs[outcome_of(i)] += std::norm(state.amplitudes()(i));

    ProjectedEnsemble ens;
    for (Index o = 0; o < n_outcomes; ++o) {
        if (probs[o] <= 1e-14) continue;
        VectorXcd post = VectorXcd::Zero(full);
        VectorXd diag = VectorXd::Zero(full);
        for (Index i = 0; i < full; ++i) {
            if (outcome_of(i) != o) continue;
            post(i) = state.amplitudes()(i);
            diag(i) = 1.0;
        }
        Index rank = full / n_outcomes;
        Projector pi(Operator(diag.cast<Complex>().asDiagonal(), dims), rank);
        post /= std::sqrt(probs[o]);
        ens.entries.push_back({o, probs[o], std::move(pi), StateVector(std::move(post), dims)});
    }
    return ens;
}

namespace {

// The rank-1 right projector |v><v| determines v up to phase; any nonzero
// column is proportional to it.
VectorXcd rank1_vector(const Projector& pi) {
    if (pi.rank() != 1) throw DimensionError("rank-1 projector expected");
    Index best = 0;
    double bn = 0;
    for (Index j = 0; j < pi.dim(); ++j) {
        double n = pi.matrix().col(j).norm();
        if (n > bn) { bn = n; best = j; }
    }
    return pi.matrix().col(best) / bn;
}

}  // namespace

std::pair<StateVector, double> fpaa_prepare(const BlockEncoding& encoding, double p_star,
                                            double delta) {
    VectorXcd v = rank1_vector(encoding.right_projector());
    PhaseSequence phases = solve_phases(fpaa_polynomial(p_star, delta));
    QsvtRun run(encoding, std::move(phases), true);
    return run_with_flags(run, StateVector(std::move(v), encoding.unitary().row_dims()));
}

int swap_test_purity(const StateVector& copy1, const StateVector& copy2,
                     const std::vector<Index>& subsystem_a, Rng& rng) {
    if (copy1.dims() != copy2.dims())
        throw DimensionError("swap_test_purity: copies over different partitions");
    MatrixXcd rho = partial_trace(copy1, subsystem_a).matrix();
    MatrixXcd sigma = partial_trace(copy2, subsystem_a).matrix();
    double overlap = (rho * sigma).trace().real();
    double p_accept = std::clamp(0.5 * (1.0 + overlap), 0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < p_accept ? 1 : -1;
}

const std::map<int, KCopyEstimator>& estimator_registry() {
    static const std::map<int, KCopyEstimator> reg = {
        {2, [](const std::vector<StateVector>& copies, const std::vector<Index>& sub, Rng& rng) {
             return swap_test_purity(copies.at(0), copies.at(1), sub, rng);
         }}};
    return reg;
}

EstimateResult estimate_nonlinear(const StateVector& state, const std::vector<Index>& measured,
                                  const std::vector<Index>& subsystem_a,
                                  const EstimationConfig& cfg) {
    auto it = estimator_registry().find(cfg.k);
    if (it == estimator_registry().end() || cfg.k < 2)
        throw DomainError("estimate_nonlinear: no estimator registered for this k");
    if (cfg.budget < 1) throw DomainError("estimate_nonlinear: budget >= 1 required");
    const KCopyEstimator& estimator = it->second;

    ProjectedEnsemble ens = project_ensemble(state, measured);

    // one FPAA copy per outcome; the polynomial and phases are shared
    struct Branch {
        StateVector copy;
        double flag_prob;
    };
    std::vector<Branch> branches;
    if (cfg.delta == 0.0) {
        for (const auto& e : ens.entries) branches.push_back({e.post, 1.0});
    } else {
        PhaseSequence phases = solve_phases(fpaa_polynomial(cfg.p_star, cfg.delta));
        // a preparation unitary with W|0...0> = |psi>
        MatrixXcd a = MatrixXcd::Identity(state.dim(), state.dim());
        a.col(0) = state.amplitudes();
        Eigen::HouseholderQR<MatrixXcd> qr(a);
        MatrixXcd w = qr.householderQ();
        Complex ph = state.amplitudes().adjoint() * w.col(0);
        w *= std::conj(ph) / std::abs(ph);
        Operator prep(std::move(w), state.dims());
        for (const auto& e : ens.entries) {
            QsvtRun run(postselect_encoding(prep, e.pi), phases, true);
            VectorXcd z = VectorXcd::Zero(state.dim());
            z(0) = 1.0;
            auto [out, p] = run_with_flags(run, StateVector(std::move(z), state.dims()));
            branches.push_back({std::move(out), p});
        }
    }

    std::vector<double> cum(ens.entries.size());
    double acc = 0;
    for (size_t j = 0; j < ens.entries.size(); ++j) {
        acc += ens.entries[j].p;
        cum[j] = acc;
    }

    double sum = 0, sum2 = 0;
    Index flag_checks = 0, flag_fails = 0;
    for (Index i = 0; i < cfg.budget; ++i) {
        Rng rng = split_rng(cfg.seed, std::uint64_t(i) + 1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double r = u(rng) * acc;
        size_t j = size_t(std::lower_bound(cum.begin(), cum.end(), r) - cum.begin());
        if (j >= ens.entries.size()) j = ens.entries.size() - 1;

        std::vector<StateVector> copies;
        copies.push_back(ens.entries[j].post);  // the measured copy itself
        for (int c = 1; c < cfg.k; ++c) {
            for (int attempt = 0;; ++attempt) {
                ++flag_checks;
                if (u(rng) < branches[j].flag_prob) break;
                ++flag_fails;
                if (attempt > 1000)
                    throw DomainError("estimate_nonlinear: persistent flag failure");
            }
            copies.push_back(branches[j].copy);
        }
        double v = estimator(copies, subsystem_a, rng);
        sum += v;
        sum2 += v * v;
    }

    const double n = double(cfg.budget);
    double mean = sum / n;
    double var = n > 1 ? std::max(0.0, (sum2 / n - mean * mean) * n / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(var / n), flag_checks ? double(flag_fails) / flag_checks : 0.0};
}

double BranchSpectrum::p_max() const {
    return *std::max_element(p_am.begin(), p_am.end());
}

double BranchSpectrum::p_min() const {
    return *std::min_element(p_am.begin(), p_am.end());
}

BranchSpectrum spectrum_from_values(std::vector<double> p_am) {
    if (p_am.empty()) throw DimensionError("spectrum_from_values: empty spectrum");
    for (double p : p_am)
        if (p < 0.0 || p > 1.0) throw DomainError("spectrum_from_values: p_am outside [0, 1]");
    BranchSpectrum s;
    s.d_r = Index(p_am.size());
    s.p_m = std::accumulate(p_am.begin(), p_am.end(), 0.0) / double(s.d_r);
    s.p_am = std::move(p_am);
    return s;
}

BranchSpectrum branch_spectrum(const MatrixXcd& columns, const Projector& target) {
    if (columns.rows() != target.dim())
        throw DimensionError("branch_spectrum: column/projector dimension mismatch");
    MatrixXcd pab = columns.adjoint() * target.matrix() * columns;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(pab, Eigen::EigenvaluesOnly);
    std::vector<double> p(es.eigenvalues().data(), es.eigenvalues().data() + columns.cols());
    for (double& x : p) {
        if (x < -1e-9) throw DomainError("branch_spectrum: negative branch probability");
        x = std::clamp(x, 0.0, 1.0);
    }
    std::sort(p.begin(), p.end());
    return spectrum_from_values(std::move(p));
}

MetricsReport metrics(const BranchSpectrum& spectrum, const SVTFunction& f) {
    if (spectrum.p_m < 1e-14) throw DomainError("metrics: degenerate outcome");
    const double dr = double(spectrum.d_r);
    double p_qsvt = 0, cross = 0, root_sum = 0;
    for (double p : spectrum.p_am) {
        double sp = std::sqrt(p);
        double fv = f.eval(sp);
        p_qsvt += fv * fv;
        cross += sp * fv;
        root_sum += sp;
    }
    p_qsvt /= dr;
    MetricsReport r{};
    r.p_qsvt = p_qsvt;
    r.f_qsvt = p_qsvt > 0 ? cross * cross / (dr * dr * spectrum.p_m * p_qsvt) : 0.0;
    r.f_overall = r.p_qsvt * r.f_qsvt;
    r.f_uhlmann = root_sum * root_sum / (dr * dr * spectrum.p_m);
    return r;
}

std::string metrics_csv_header() { return "p_star,f_qsvt,p_qsvt,f_overall,f_uhlmann"; }

std::string metrics_csv_row(double p_star, const MetricsReport& report) {
    std::ostringstream os;
    os.precision(12);
    os << p_star << "," << report.f_qsvt << "," << report.p_qsvt << "," << report.f_overall
       << "," << report.f_uhlmann;
    return os.str();
}

BlockEncoding MixedInstance::encoding() const {
    return mixed_postselect_encoding(u, d_a, d_b, target);
}

BranchSpectrum MixedInstance::spectrum() const {
    MatrixXcd cols(u.rows(), d_a);
    for (Index a = 0; a < d_a; ++a) cols.col(a) = u.matrix().col(a * d_b);
    return branch_spectrum(cols, target);
}

StateVector MixedInstance::purified_state() const {
    const Index big = u.rows();
    VectorXcd v = VectorXcd::Zero(d_a * big);
    for (Index a = 0; a < d_a; ++a)
        v.segment(a * big, big) = u.matrix().col(a * d_b) / std::sqrt(double(d_a));
    Dims dims{d_a, d_a, d_b};
    return StateVector(std::move(v), std::move(dims));
}

MixedInstance random_mixed_instance(Index n_qubits, Index n_mixed, Index n_measured, Rng& rng) {
    if (n_mixed > n_qubits || n_measured > n_qubits)
        throw DimensionError("random_mixed_instance: partition exceeds register");
    Index d = Index(1) << n_qubits;
    if (d > kMaxOperatorDim) throw CapacityError("random_mixed_instance: exceeds envelope");
    std::vector<Index> meas(n_measured);
    std::vector<int> bits(n_measured, 0);
    for (Index q = 0; q < n_measured; ++q) meas[q] = q;
    return MixedInstance{Operator(haar_unitary(d, rng), Dims(n_qubits, 2)),
                         Index(1) << n_mixed, Index(1) << (n_qubits - n_mixed),
                         basis_projector(n_qubits, meas, bits)};
}

LaaResult laa_simulate(const MixedInstance& instance, double p_star, double delta_mult) {
    BlockEncoding enc = instance.encoding();
    PhaseSequence phases = solve_phases(laa_polynomial(p_star, delta_mult));
    MatrixXcd b = realized_block(enc, phases.phases, true);

    const Index big = instance.u.rows();
    VectorXcd in = VectorXcd::Zero(instance.d_a * big);
    for (Index a = 0; a < instance.d_a; ++a)
        in(a * big + a * instance.d_b) = 1.0 / std::sqrt(double(instance.d_a));
    VectorXcd out(in.size());
    for (Index a = 0; a < instance.d_a; ++a)
        out.segment(a * big, big) = b * in.segment(a * big, big);
    double p = out.squaredNorm();
    if (p < 1e-14) throw DomainError("laa_simulate: degenerate flag probability");
    out /= std::sqrt(p);
    Dims dims{instance.d_a, instance.d_a, instance.d_b};
    return {StateVector(std::move(out), std::move(dims)), p, phases.realized};
}

std::pair<StateVector, double> purified_fpaa(const MixedInstance& instance, double p_star,
                                             double delta) {
    StateVector joint = instance.purified_state();
    if (joint.dim() > kMaxOperatorDim) throw CapacityError("purified_fpaa: exceeds envelope");
    Dims dims = joint.dims();
    MatrixXcd pim = kron(MatrixXcd::Identity(instance.d_a, instance.d_a),
                         instance.target.matrix());
    Projector left(Operator(std::move(pim), dims), instance.d_a * instance.target.rank());
    BlockEncoding enc(Operator(MatrixXcd::Identity(joint.dim(), joint.dim()), dims),
                      state_projector(joint), std::move(left));
    return fpaa_prepare(enc, p_star, delta);
}

}  // namespace qps
