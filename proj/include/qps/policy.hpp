/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QPS_POLICY_HPP
#define QPS_POLICY_HPP

namespace qps {

/// Centralized numeric tolerances. Structural checks (unitarity, idempotence,
/// reconstruction) use `structural`; statistical or accumulated-roundoff
/// checks use `statistical`.
struct NumericPolicy {
    double structural = 1e-10;
    double statistical = 1e-9;
    double norm_slack = 1e-12;
    double degenerate = 1e-14;      // probabilities below this are treated as zero
    double eig_clamp = -1e-12;      // negative-eigenvalue clamp for PSD drift
};

inline const NumericPolicy& policy() {
    static NumericPolicy p;
    return p;
}

}  // namespace qps

#endif
