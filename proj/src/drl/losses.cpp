#include <algorithm>
#include <cmath>

#include "drlids/common/error.hpp"
#include "drlids/drl/drl.hpp"

namespace drlids::drl {

double policy_gradient_loss(std::span<const double> chosen_probs, std::span<const double> advantages) {
    if (chosen_probs.size() != advantages.size()) throw LengthMismatch("probability and advantage sequences differ");
    double loss = 0.0;
    for (std::size_t t = 0; t < chosen_probs.size(); ++t) {
        loss -= std::log(std::max(chosen_probs[t], kProbabilityFloor)) * advantages[t];
    }
    return loss;
}

RegularizedLoss regularized_loss(const Mlp& net, const std::vector<std::vector<double>>& targets,
                                 const std::vector<std::vector<double>>& predictions, double lambda_reg) {
    if (targets.size() != predictions.size()) throw LengthMismatch("target and prediction batches differ in size");
    if (targets.empty()) throw EmptyDataset("regularized loss needs a batch of at least one sample");
    const double root_m = std::sqrt(static_cast<double>(targets.size()));
    double sq = 0.0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        if (targets[k].size() != predictions[k].size()) throw DimensionMismatch("target/prediction width mismatch");
        for (std::size_t i = 0; i < targets[k].size(); ++i) {
            const double d = targets[k][i] - predictions[k][i];
            sq += d * d;
        }
    }
    RegularizedLoss out;
    out.mse_term = sq / root_m;
    out.penalty_term = lambda_reg / root_m * net.weight_sum_of_squares();
    return out;
}

double combined_diagnostic(double mse_term, double discounted_sum, double penalty_term) {
    return mse_term * discounted_sum + penalty_term;
}

}  // namespace drlids::drl
