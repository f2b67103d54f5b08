/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qps/blockenc.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace qps {

BlockEncoding::BlockEncoding(Operator unitary, Projector right, Projector left)
    : u_(std::move(unitary)), right_(std::move(right)), left_(std::move(left)) {
    const MatrixXcd& u = u_.matrix();
    if (u.rows() != u.cols() || u.rows() != right_.dim() || u.rows() != left_.dim())
        throw DimensionError("BlockEncoding: dimension mismatch");
    MatrixXcd id = MatrixXcd::Identity(u.rows(), u.cols());
    if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > 1e-8)
        throw DomainError("BlockEncoding: operator is not unitary");
    // power iteration on M'M; a full SVD here would dominate construction cost
    MatrixXcd m = encoded_matrix();
    VectorXcd v = VectorXcd::Ones(m.cols()).normalized();
    double s2 = 0;
    for (int it = 0; it < 60; ++it) {
        v = m.adjoint() * (m * v);
        double n = v.norm();
        if (n < 1e-300) { s2 = 0; break; }
        s2 = n;
        v /= n;
    }
    if (std::sqrt(s2) > 1.0 + policy().statistical)
        throw DomainError("BlockEncoding: encoded singular value exceeds 1");
}

MatrixXcd BlockEncoding::encoded_matrix() const {
    return left_.matrix() * u_.matrix() * right_.matrix();
}

BlockEncoding postselect_encoding(const Operator& prep_unitary, const Projector& target) {
    const Index d = prep_unitary.rows();
    VectorXcd zero = VectorXcd::Zero(d);
    zero(0) = 1.0;
    VectorXcd psi = prep_unitary.matrix() * zero;
    double pm = (psi.adjoint() * target.matrix() * psi).real()(0);
    if (pm < policy().degenerate)
        throw DomainError("postselect_encoding: zero overlap, post-selected state undefined");
    MatrixXcd pi0 = zero * zero.adjoint();
    Projector right(Operator(pi0, prep_unitary.row_dims()), 1);
    return BlockEncoding(prep_unitary, right, target);
}

BlockEncoding mixed_postselect_encoding(const Operator& prep_unitary, Index d_a, Index d_b,
                                        const Projector& target) {
    const Index d = prep_unitary.rows();
    if (d_a * d_b != d)
        throw DimensionError("mixed_postselect_encoding: partition does not match system");
    MatrixXcd zb = MatrixXcd::Zero(d_b, d_b);
    zb(0, 0) = 1.0;
    MatrixXcd pib = kron(MatrixXcd::Identity(d_a, d_a), zb);
    Projector right(Operator(pib, Dims{d_a, d_b}), d_a);
    return BlockEncoding(prep_unitary, right, target);
}

MatrixXcd add_gate(Index counter_dim) {
    MatrixXcd add = MatrixXcd::Zero(counter_dim, counter_dim);
    for (Index i = 0; i < counter_dim; ++i) add((i + 1) % counter_dim, i) = 1.0;
    return add;
}

MatrixXcd HybridCircuit::kraus_chain() const {
    const Index dim = Index(1) << n_qubits;
    Dims dims(n_qubits, 2);
    MatrixXcd m = MatrixXcd::Identity(dim, dim);
    size_t mi = 0;
    for (size_t g = 0; g <= gates.size(); ++g) {
        while (mi < measurements.size() && measurements[mi].time == Index(g)) {
            const auto& meas = measurements[mi++];
            MatrixXcd proj = MatrixXcd::Zero(2, 2);
            proj(meas.outcome, meas.outcome) = 1.0;
            m = embed(proj, {meas.qubit}, dims) * m;
        }
        if (g < gates.size()) m = embed(gates[g].u, gates[g].targets, dims) * m;
    }
    return m;
}

namespace {

void check_envelope(Index dim) {
    if (dim > kMaxOperatorDim)
        throw CapacityError("block encoding exceeds the dense operator envelope");
}

std::vector<HybridCircuit::Measurement> sorted_measurements(const HybridCircuit& c) {
    auto ms = c.measurements;
    std::stable_sort(ms.begin(), ms.end(),
                     [](const auto& a, const auto& b) { return a.time < b.time; });
    return ms;
}

}  // namespace

BlockEncoding swap_deferral_encoding(const HybridCircuit& circuit) {
    const Index n = circuit.n_qubits;
    const Index nm = circuit.n_meas();
    const Index total = n + nm;
    check_envelope(Index(1) << total);
    Dims dims(total, 2);
    const Index dim = Index(1) << total;

    MatrixXcd swap(4, 4);
    swap << 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1;

    auto ms = sorted_measurements(circuit);
    MatrixXcd u = MatrixXcd::Identity(dim, dim);
    size_t mi = 0;
    for (size_t g = 0; g <= circuit.gates.size(); ++g) {
        while (mi < ms.size() && ms[mi].time == Index(g)) {
            Index anc = n + Index(mi);
            u = embed(swap, {ms[mi].qubit, anc}, dims) * u;
            ++mi;
        }
        if (g < circuit.gates.size())
            u = embed(circuit.gates[g].u, circuit.gates[g].targets, dims) * u;
    }

    std::vector<Index> anc_idx(nm);
    std::vector<int> bits(nm);
    for (Index j = 0; j < nm; ++j) {
        anc_idx[j] = n + j;
        bits[j] = ms[j].outcome;
    }
    Projector pi = basis_projector(total, anc_idx, bits);
    return BlockEncoding(Operator(std::move(u), dims), pi, pi);
}

BlockEncoding compression_gadget_encoding(const HybridCircuit& circuit) {
    const Index n = circuit.n_qubits;
    const Index nm = circuit.n_meas();
    const Index sys_dim = Index(1) << n;
    // counter must distinguish "no measurement matched" from "all matched",
    // so it counts 0..N_meas: dimension N_meas + 1
    const Index cdim = nm + 1;
    const Index dim = sys_dim * cdim;
    check_envelope(dim);
    Dims dims(n, 2);
    dims.push_back(cdim);
    const Index counter_pos = n;

    MatrixXcd add = add_gate(cdim);
    auto ms = sorted_measurements(circuit);
    MatrixXcd u = MatrixXcd::Identity(dim, dim);
    size_t mi = 0;
    for (size_t g = 0; g <= circuit.gates.size(); ++g) {
        while (mi < ms.size() && ms[mi].time == Index(g)) {
            const auto& meas = ms[mi++];
            // ADD (x) |m><m| + 1 (x) |m_bar><m_bar| on (qubit, counter)
            MatrixXcd pm = MatrixXcd::Zero(2, 2), pb = MatrixXcd::Zero(2, 2);
            pm(meas.outcome, meas.outcome) = 1.0;
            pb(1 - meas.outcome, 1 - meas.outcome) = 1.0;
            MatrixXcd cadd = kron(pm, add) + kron(pb, MatrixXcd::Identity(cdim, cdim));
            u = embed(cadd, {meas.qubit, counter_pos}, dims) * u;
        }
        if (g < circuit.gates.size())
            u = embed(circuit.gates[g].u, circuit.gates[g].targets, dims) * u;
    }

    // counter starts at |1>; N_meas matched increments wrap it to |0>
    auto counter_proj = [&](Index val) {
        MatrixXcd c = MatrixXcd::Zero(cdim, cdim);
        c(val, val) = 1.0;
        return Projector(Operator(kron(MatrixXcd::Identity(sys_dim, sys_dim), c), dims), sys_dim);
    };
    return BlockEncoding(Operator(std::move(u), dims), counter_proj(1 % cdim),
                         counter_proj(0));
}

void HybridCircuit::save(std::ostream& os) const {
    os << "QUBITS " << n_qubits << "\n";
    os.precision(17);
    size_t mi = 0;
    auto ms = sorted_measurements(*this);
    for (size_t g = 0; g <= gates.size(); ++g) {
        while (mi < ms.size() && ms[mi].time == Index(g)) {
            os << "MEAS " << ms[mi].time << " " << ms[mi].qubit << " " << ms[mi].outcome << "\n";
            ++mi;
        }
        if (g < gates.size()) {
            os << "GATE";
            for (Index t : gates[g].targets) os << " " << t;
            const MatrixXcd& u = gates[g].u;
            for (Index i = 0; i < u.rows(); ++i)
                for (Index j = 0; j < u.cols(); ++j)
                    os << " " << u(i, j).real() << " " << u(i, j).imag();
            os << "\n";
        }
    }
}

HybridCircuit HybridCircuit::load(std::istream& is) {
    HybridCircuit c;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "QUBITS") {
            ls >> c.n_qubits;
        } else if (tag == "MEAS") {
            Measurement m{};
            ls >> m.time >> m.qubit >> m.outcome;
            if (!ls || (m.outcome != 0 && m.outcome != 1))
                throw DomainError("HybridCircuit::load: bad MEAS line");
            c.measurements.push_back(m);
        } else if (tag == "GATE") {
            // remaining tokens: targets then entries; count determines arity
            std::vector<double> nums;
            double v;
            while (ls >> v) nums.push_back(v);
            size_t nt = 0;
            if (nums.size() == 1 + 8) nt = 1;
            else if (nums.size() == 2 + 32) nt = 2;
            else throw DomainError("HybridCircuit::load: bad GATE line");
            Gate g;
            for (size_t k = 0; k < nt; ++k) g.targets.push_back(Index(nums[k]));
            Index d = nt == 1 ? 2 : 4;
            g.u.resize(d, d);
            size_t p = nt;
            for (Index i = 0; i < d; ++i)
                for (Index j = 0; j < d; ++j) {
                    g.u(i, j) = Complex(nums[p], nums[p + 1]);
                    p += 2;
                }
            c.gates.push_back(std::move(g));
        } else {
            throw DomainError("HybridCircuit::load: unknown tag " + tag);
        }
    }
    if (c.n_qubits <= 0) throw DomainError("HybridCircuit::load: missing QUBITS header");
    return c;
}

HybridCircuit random_hybrid_circuit(Index n_qubits, Index n_gates, Index n_meas, Rng& rng) {
    HybridCircuit c;
    c.n_qubits = n_qubits;
    std::uniform_int_distribution<Index> pick_q(0, n_qubits - 1);
    for (Index g = 0; g < n_gates; ++g) {
        HybridCircuit::Gate gate;
        Index a = pick_q(rng), b = pick_q(rng);
        while (b == a) b = pick_q(rng);
        gate.targets = {a, b};
        gate.u = haar_unitary(4, rng);
        c.gates.push_back(std::move(gate));
    }
    std::uniform_int_distribution<Index> pick_t(0, n_gates);
    std::uniform_int_distribution<int> pick_m(0, 1);
    for (Index j = 0; j < n_meas; ++j)
        c.measurements.push_back({pick_t(rng), pick_q(rng), pick_m(rng)});
    std::stable_sort(c.measurements.begin(), c.measurements.end(),
                     [](const auto& x, const auto& y) { return x.time < y.time; });
    return c;
}

}  // namespace qps
