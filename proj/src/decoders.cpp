/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qps/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qps {

Projector TeleportInstance::target() const {
    const Index dim = d_e * d_d;
    VectorXcd diag = VectorXcd::Zero(dim);
    for (Index j = 0; j < d_d; ++j) diag(m * d_d + j) = 1.0;
    return Projector(Operator(MatrixXcd(diag.asDiagonal()), Dims{d_e, d_d}), d_d);
}

BlockEncoding TeleportInstance::encoding() const {
    return mixed_postselect_encoding(u, d_a, d_b, target());
}

BranchSpectrum TeleportInstance::spectrum() const {
    MatrixXcd cols(u.rows(), d_a);
    for (Index a = 0; a < d_a; ++a) cols.col(a) = u.matrix().col(a * d_b);
    return branch_spectrum(cols, target());
}

StateVector TeleportInstance::omega_red() const {
    const Index big = u.rows();
    VectorXcd v = VectorXcd::Zero(d_a * big);
    for (Index a = 0; a < d_a; ++a)
        v.segment(a * big, big) = u.matrix().col(a * d_b) / std::sqrt(double(d_a));
    return StateVector(std::move(v), Dims{d_a, d_e, d_d});
}

StateVector TeleportInstance::omega_rdm() const {
    StateVector red = omega_red();
    VectorXcd w(d_a * d_d);
    for (Index r = 0; r < d_a; ++r)
        w.segment(r * d_d, d_d) = red.amplitudes().segment((r * d_e + m) * d_d, d_d);
    double pm = w.squaredNorm();
    if (pm < 1e-14) throw DomainError("TeleportInstance: outcome has vanishing probability");
    w /= std::sqrt(pm);
    return StateVector(std::move(w), Dims{d_a, d_d});
}

double TeleportInstance::p_m() const {
    StateVector red = omega_red();
    double pm = 0;
    for (Index r = 0; r < d_a; ++r)
        pm += red.amplitudes().segment((r * d_e + m) * d_d, d_d).squaredNorm();
    return pm;
}

TeleportInstance random_teleport_instance(Index n_qubits, Index n_a, Index n_e, Rng& rng) {
    if (n_a > n_qubits || n_e > n_qubits)
        throw DimensionError("random_teleport_instance: partition exceeds register");
    Index d = Index(1) << n_qubits;
    if (d > kMaxOperatorDim) throw CapacityError("random_teleport_instance: exceeds envelope");
    Index d_e = Index(1) << n_e;
    std::uniform_int_distribution<Index> pick_m(0, d_e - 1);
    TeleportInstance t{Operator(haar_unitary(d, rng), Dims(n_qubits, 2)),
                       Index(1) << n_a,
                       Index(1) << (n_qubits - n_a),
                       d_e,
                       Index(1) << (n_qubits - n_e),
                       0};
    t.m = pick_m(rng);
    return t;
}

std::string decoder_csv_header() {
    return "decoder,p_star,f_decoding,p_succ,f_overall,f_uhlmann";
}

std::string decoder_csv_row(double p_star, const DecoderReport& report) {
    std::ostringstream os;
    os.precision(12);
    os << report.decoder << "," << p_star << "," << report.f_decoding << "," << report.p_succ
       << "," << report.f_overall << "," << report.f_uhlmann;
    return os.str();
}

MetricsReport teleport_metrics(const BranchSpectrum& spectrum, const SVTFunction& f) {
    if (spectrum.p_m < 1e-14) throw DomainError("teleport_metrics: degenerate outcome");
    const double dr = double(spectrum.d_r);
    double p_qsvt = 0, cross = 0, root_sum = 0;
    for (double p : spectrum.p_am) {
        double sp = std::sqrt(p);
        double fv = f.eval(sp);
        p_qsvt += p * fv * fv;
        cross += sp * fv;
        root_sum += sp;
    }
    p_qsvt /= dr * spectrum.p_m;
    MetricsReport r{};
    r.p_qsvt = p_qsvt;
    r.f_qsvt = p_qsvt > 0 ? cross * cross / (dr * dr * spectrum.p_m * p_qsvt) : 0.0;
    r.f_overall = r.p_qsvt * r.f_qsvt;
    r.f_uhlmann = root_sum * root_sum / (dr * dr * spectrum.p_m);
    return r;
}

DecoderReport pseudoinverse_decode(const BranchSpectrum& spectrum, double p_star) {
    // branches with vanishing p_am cannot be inverted; decode the injective
    // sub-block and record its size
    BranchSpectrum sub = spectrum;
    sub.p_am.erase(std::remove_if(sub.p_am.begin(), sub.p_am.end(),
                                  [](double p) { return p < 1e-14; }),
                   sub.p_am.end());
    if (sub.p_am.empty())
        throw DomainError("pseudoinverse_decode: encoding map has no injective block");
    MetricsReport mr = teleport_metrics(sub, SVTFunction::trunc_inverse(p_star));
    DecoderReport r{"pseudoinverse", mr.f_qsvt, mr.p_qsvt, mr.f_overall, 0.0,
                    Index(sub.p_am.size())};
    // the Uhlmann bound counts every branch, decodable or not
    double root_sum = 0;
    for (double p : spectrum.p_am) root_sum += std::sqrt(p);
    double dr = double(spectrum.d_r);
    r.f_uhlmann = root_sum * root_sum / (dr * dr * spectrum.p_m);
    return r;
}

DecoderReport pseudoinverse_decode(const TeleportInstance& instance, double p_star) {
    return pseudoinverse_decode(instance.spectrum(), p_star);
}

namespace {

double uhlmann_vs_maximally_mixed(const Operator& omega_r) {
    Index dr = omega_r.rows();
    return fidelity(MatrixXcd::Identity(dr, dr) / double(dr), omega_r.matrix());
}

}  // namespace

DecoderReport yk_teleport_decode(const TeleportInstance& instance) {
    StateVector psi = instance.omega_rdm();
    Operator omega_d = partial_trace(psi, {1});
    auto [purity_d, s2_d] = purity_renyi2(omega_d);
    double dr = double(instance.d_a), dd = double(instance.d_d);
    double pm = instance.p_m();
    DecoderReport r{"yk", 0, 0, 0, 0, instance.d_a};
    r.f_decoding = std::exp(s2_d) / dr;
    r.p_succ = pm / dd * purity_d;
    r.f_overall = r.f_decoding * r.p_succ;
    r.f_uhlmann = uhlmann_vs_maximally_mixed(partial_trace(psi, {0}));
    return r;
}

DecoderReport petz_teleport_decode(const TeleportInstance& instance) {
    StateVector psi = instance.omega_rdm();
    Operator omega_r = partial_trace(psi, {0});
    auto [purity_r, s2_r] = purity_renyi2(omega_r);
    double dr = double(instance.d_a);
    double pm = instance.p_m();
    DecoderReport r{"petz", 0, 0, 0, 0, instance.d_a};
    r.f_decoding = std::exp(s2_r) / dr;
    r.p_succ = dr * pm * purity_r;
    r.f_overall = r.f_decoding * r.p_succ;
    r.f_uhlmann = uhlmann_vs_maximally_mixed(omega_r);
    return r;
}

std::pair<DecoderReport, DecoderReport> decoherence_decoders(const StateVector& omega_red) {
    if (omega_red.dims().size() != 3)
        throw DimensionError("decoherence_decoders: expected tripartite R (x) E (x) D");
    double dr = double(omega_red.dims()[0]);
    double de = double(omega_red.dims()[1]);
    double dd = double(omega_red.dims()[2]);

    Operator omega_d = partial_trace(omega_red, {2});
    Operator omega_rd = partial_trace(omega_red, {0, 2});
    auto [purity_d, s2_d] = purity_renyi2(omega_d);
    auto [purity_rd, s2_rd] = purity_renyi2(omega_rd);
    double f = std::exp(s2_d - s2_rd) / dr;
    double f_uhl = uhlmann_vs_maximally_mixed(partial_trace(omega_red, {0}));

    DecoderReport yk{"yk", f, purity_d / dd, 0, f_uhl, Index(dr)};
    DecoderReport petz{"petz", f, dr / de * purity_d, 0, f_uhl, Index(dr)};
    yk.f_overall = yk.f_decoding * yk.p_succ;
    petz.f_overall = petz.f_decoding * petz.p_succ;
    return {yk, petz};
}

AqecResult aqec_check(const BranchSpectrum& spectrum, double epsilon, double epsilon_prime) {
    if (!(epsilon_prime < epsilon && epsilon < 1.0))
        throw DomainError("aqec_check: need epsilon_prime < epsilon < 1");
    double dev = 0;
    for (double p : spectrum.p_am) dev += std::abs(p / spectrum.p_m - 1.0);
    dev /= 2.0 * double(spectrum.d_r);
    AqecResult r{};
    r.deviation = dev;
    r.satisfied = dev <= epsilon_prime;
    r.p_qsvt_bound = (1.0 - epsilon_prime / epsilon) * (1.0 - epsilon);
    return r;
}

}  // namespace qps
