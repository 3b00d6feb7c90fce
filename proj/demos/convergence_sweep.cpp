// Convergence with q_n = 1 - 1/n against the fixed-q floor, then a
// Voronovskaya table, all written as CSV to stdout.

#include <iostream>

#include "qbd/experiments.hpp"

int main() {
    using namespace qbd;

    ExperimentConfig cfg;
    cfg.fn = "absdev";
    cfg.ns = {4, 8, 16, 32, 64};
    cfg.xs = {0.25, 0.5};
    write_csv(convergence_experiment(cfg), std::cout);
    std::cout << '\n';

    cfg.sequence = QnSequence::parse("const:0.5");
    write_csv(convergence_experiment(cfg), std::cout);
    std::cout << '\n';

    ExperimentConfig v;
    v.fn = "square";
    v.ns = {8, 16, 32, 64, 128};
    v.xs = {0.5};
    write_csv(voronovskaya_experiment(v), std::cout);
    return 0;
}
