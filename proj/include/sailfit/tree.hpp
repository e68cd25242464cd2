#pragma once

#include <string>
#include <vector>

#include "sailfit/features.hpp"
#include "sailfit/parallel.hpp"

namespace sailfit {

// Arena node: either Internal {feature_index, threshold, left, right} or
// Leaf {value, region_id}. Rows with x[feature] <= threshold go left.
struct TreeNode {
    bool is_leaf = true;
    int feature_index = -1;
    double threshold = 0;
    int left = -1;
    int right = -1;
    double value = 0;     // USD
    int region_id = -1;   // leaf ordinal in preorder; leaves partition the space
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    std::size_t leaf_count() const;
    // 1-indexed leaf depth maximum; a lone root has height 0.
    std::size_t height() const;
};

struct TreeConfig {
    std::size_t max_leaves = 8;
    std::size_t max_depth = 4;        // split allowed while node depth < max_depth
    std::size_t min_samples_leaf = 5;
};

// Greedy best-first CART: repeatedly split the leaf whose best split gives
// the largest squared-error reduction. Candidate thresholds are midpoints
// between consecutive distinct sorted feature values. Ties: within a leaf,
// lowest feature index then lowest threshold; across leaves, lowest node id.
// Stops at max_leaves, max_depth, min_samples_leaf, or zero achievable gain.
//
// Leaf value = sum(targets) / (count + leaf_value_offset), the plain mean at
// offset 0; the boosting module passes lambda*n as the offset.
//
// The parallel mode searches features concurrently; per-feature scans are
// bitwise the serial arithmetic and the cross-feature argmax runs serially in
// feature order, so both modes produce the identical tree.
RegressionTree fit_tree(const Matrix& X, const std::vector<double>& targets,
                        const TreeConfig& config, ExecMode mode = ExecMode::Parallel,
                        double leaf_value_offset = 0.0);

// Value of the unique leaf whose region contains the row.
double predict_tree(const RegressionTree& tree, const double* row, std::size_t width);
double predict_tree(const RegressionTree& tree, const std::vector<double>& row);

// Preorder text encoding, one node per line ("I <feature> <threshold>" or
// "L <value>"), exact decimal round-trip.
std::string serialize_tree(const RegressionTree& tree);
RegressionTree parse_tree(const std::string& text);
// Single-tree line decoding used by the ensemble format: parses n_nodes lines
// starting at `pos` within `lines`.
RegressionTree parse_tree_lines(const std::vector<std::string>& lines, std::size_t& pos);

} // namespace sailfit
