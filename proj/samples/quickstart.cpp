// Simulate one negative-binomial data set and run exhaustive BIC selection.

#include "glmsel/glmsel.hpp"

#include <iostream>

int main() {
    using namespace glmsel;

    DesignSpec design;
    design.n = 300;
    design.p_signal = 3;
    design.p_noise = 3;
    design.seed = RngStream(2024, 0).substream(0);
    const Matrix x = gen_design(design);

    Vector beta0(6);
    beta0 << 0.5, 0.5, 0.5, 0.0, 0.0, 0.0;
    const FamilyModel fam = FamilyModel::negbin(10.0);
    const Dataset ds(x, gen_glm_responses(x, fam, beta0, RngStream(2024, 0).substream(1)));

    const SelectionOutcome out =
        select(CriterionSpec::bic(CriterionScale::per_observation), ds, fam, 0b000111, beta0);

    std::cout << "selected columns:";
    for (int j = 0; j < 6; ++j) {
        if ((out.chosen.alpha >> j) & 1u) std::cout << " x" << j + 1;
    }
    std::cout << "\nlabel: " << label_name(out.label) << "\nbeta_hat: " << out.chosen.fit.beta_hat.transpose()
              << "\nsquared error: " << out.beta_full_error << '\n';
}
