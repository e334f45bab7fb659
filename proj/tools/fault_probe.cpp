// Negative-control build: this target is compiled with QWILSON_FAULT_INJECT,
// which perturbs one structure constant inside wilson_constants.  Running the
// algebra suite against the perturbed constants must produce nonzero residual
// witnesses and a failing exit code; a green run here would mean the harness
// cannot detect a broken relation.
#include <iostream>

#include "qwilson/harness.hpp"

int main() {
    qwilson::Config cfg;
    cfg.suites = {"algebra"};
    cfg.sample_count = 1;
    cfg.closure_N = 4;
    cfg.N_max = 5;
    cfg.n_max = 2;
    cfg.x_max = 2;
    cfg.seed = 3;
    cfg.validate();
    const qwilson::SuiteReport rep = qwilson::run_suite(cfg);
    qwilson::emit_report(rep, "records", std::cout);
    return qwilson::suite_exit_code(rep);
}
