#pragma once

#include <string>
#include <vector>

#include "dbac/attacker.hpp"
#include "dbac/corpus.hpp"

namespace dbac {

enum class Direction { AtoT, TtoA };
enum class CorpusSide { Hgc, Mgc };

std::string direction_name(Direction d);

// Per-sample (quality, priors) aggregation is the default; the group-wise
// variant averages over occupied (attribute, task) cells instead.
enum class OmegaAggregation { PerSample, PerGroup };

struct OmegaScore {
    double value = 0.0;
    Direction direction = Direction::AtoT;
    CorpusSide side = CorpusSide::Hgc;
    QKind q_kind = QKind::Accuracy;
    std::size_t n_samples = 0;
};

struct DbacScore {
    double value = 0.0;
    Direction direction = Direction::AtoT;
    double epsilon = 1e-8;
};

struct LicScore {
    double value = 0.0;   // lic_m - lic_h
    double lic_h = 0.0;
    double lic_m = 0.0;
};

struct StatSummary {
    double mean = 0.0;
    double sample_std = 0.0;   // (n-1) denominator
    double ci_halfwidth = 0.0; // 1.96 * s / sqrt(n)
    std::size_t n = 0;
};

// Bayes-corrected leakage:
//   A->T: mean_i q_i * task_prior_i / attr_prior_i
//   T->A: mean_i q_i * attr_prior_i / task_prior_i
// The prior that lands in the denominator must be strictly positive.
OmegaScore leakage_omega(const QualityVector& q, const std::vector<double>& task_prior,
                         const std::vector<double>& attr_prior, Direction direction,
                         CorpusSide side,
                         OmegaAggregation aggregation = OmegaAggregation::PerSample,
                         const std::vector<std::pair<int, int>>* group_keys = nullptr);

// (omega_m - omega_h) / (omega_m + omega_h + epsilon); value in (-1, 1),
// positive = the model amplifies, negative = it mitigates.
DbacScore dbac(const OmegaScore& omega_m, const OmegaScore& omega_h, double epsilon = 1e-8);
double dbac_value(double omega_m, double omega_h, double epsilon = 1e-8);

// Confidence-weighted accuracy gap: per side mean_i 1{argmax == label} *
// max-probability, then lic_m - lic_h.
LicScore lic_score(const std::vector<Eigen::VectorXd>& hgc_preds,
                   const std::vector<int>& hgc_labels,
                   const std::vector<Eigen::VectorXd>& mgc_preds,
                   const std::vector<int>& mgc_labels);

// One side of lic_score: mean_i 1{argmax == label} * max-probability.
double lic_side_value(const std::vector<Eigen::VectorXd>& preds,
                      const std::vector<int>& labels);

// Mean over tasks of max_a P(a | t), computed from label counts alone.
// Requires a binary attribute domain; tasks that never occur are skipped.
// 0.5 means perfectly balanced labels.
double cooccurrence_balance(const Dataset& d);

// Sample std / |mean|; |mean| below `min_mean` is degenerate and an error.
double coefficient_of_variation(const std::vector<double>& scores, double min_mean = 1e-9);

// 100 * (cv_ref - cv_new) / cv_ref; cv_ref must be > 0.
double percent_reduction(double cv_ref, double cv_new);

// Normal-approximation 95% interval over independent run scores (n >= 2).
StatSummary confidence_interval(const std::vector<double>& scores);

// "0.64_{0.02}" rendering used by the markdown reports.
std::string format_subscript_ci(double mean, double ci_halfwidth, int decimals = 2);

}  // namespace dbac
