#pragma once

namespace psmatch {

// A binary-response link: strictly increasing CDF mapping the linear index
// into (0,1), plus the pieces the likelihood machinery needs in
// overflow-safe form. Plain function pointers keep call overhead out of the
// per-unit hot loops.
struct LinkFunction {
    double (*cdf)(double);      // t -> p
    double (*density)(double);  // derivative of cdf
    double (*log_cdf)(double);  // log p, safe for large |t|
    double (*log_ccdf)(double); // log(1-p), safe for large |t|
    // Per-unit gradient weight (w - p) * density / (p (1-p)); links may
    // supply an algebraically simplified form that avoids 0/0 in the tails.
    double (*score_weight)(double t, int w);
    // Per-unit information weight density^2 / (p (1-p)).
    double (*info_weight)(double t);
    const char* name;
};

// Logistic link with the simplified weights (score weight w - p,
// information weight p (1-p)); stable over the whole double range.
const LinkFunction& logistic_link();

} // namespace psmatch
