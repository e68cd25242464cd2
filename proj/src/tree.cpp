#include "sailfit/tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sailfit/error.hpp"
#include "sailfit/textio.hpp"

namespace sailfit {

std::size_t RegressionTree::leaf_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes) n += node.is_leaf ? 1 : 0;
    return n;
}

std::size_t RegressionTree::height() const {
    std::size_t best = 0;
    // depth-first over (node, depth)
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        const TreeNode& node = nodes[static_cast<std::size_t>(id)];
        if (node.is_leaf) {
            best = std::max(best, d);
        } else {
            stack.push_back({node.left, d + 1});
            stack.push_back({node.right, d + 1});
        }
    }
    return best;
}

namespace {

struct Split {
    bool valid = false;
    double gain = 0;       // SSE reduction, > 0 when valid
    int feature = -1;
    double threshold = 0;
};

// Best split of the given sample set along one feature. Keeps the first
// (lowest-threshold) candidate among equal gains.
Split best_split_for_feature(const Matrix& X, const std::vector<double>& targets,
                             const std::vector<int>& samples, int feature,
                             std::size_t min_samples_leaf) {
    const std::size_t m = samples.size();
    Split best;
    best.feature = feature;
    if (m < 2 * min_samples_leaf) return best;

    std::vector<std::pair<double, int>> order(m);
    for (std::size_t k = 0; k < m; ++k)
        order[k] = {X(static_cast<std::size_t>(samples[k]), static_cast<std::size_t>(feature)),
                    samples[k]};
    std::sort(order.begin(), order.end());

    double total = 0;
    for (std::size_t k = 0; k < m; ++k) total += targets[static_cast<std::size_t>(order[k].second)];

    double left_sum = 0;
    const double parent_term = total * total / static_cast<double>(m);
    for (std::size_t k = 0; k + 1 < m; ++k) {
        left_sum += targets[static_cast<std::size_t>(order[k].second)];
        if (order[k].first == order[k + 1].first) continue;  // not a boundary
        const std::size_t nl = k + 1, nr = m - nl;
        if (nl < min_samples_leaf || nr < min_samples_leaf) continue;
        const double right_sum = total - left_sum;
        const double gain = left_sum * left_sum / static_cast<double>(nl) +
                            right_sum * right_sum / static_cast<double>(nr) - parent_term;
        if (!best.valid || gain > best.gain) {
            best.valid = true;
            best.gain = gain;
            best.threshold = 0.5 * (order[k].first + order[k + 1].first);
        }
    }
    return best;
}

Split best_split(const Matrix& X, const std::vector<double>& targets,
                 const std::vector<int>& samples, std::size_t min_samples_leaf,
                 ExecMode mode) {
    // Constant targets split nowhere; checked exactly so fp noise in the
    // prefix sums can never manufacture a spurious gain.
    double lo = targets[static_cast<std::size_t>(samples[0])];
    double hi = lo;
    for (int s : samples) {
        lo = std::min(lo, targets[static_cast<std::size_t>(s)]);
        hi = std::max(hi, targets[static_cast<std::size_t>(s)]);
    }
    if (lo == hi) return {};

    const int p = static_cast<int>(X.cols);
    std::vector<Split> per_feature(static_cast<std::size_t>(p));
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < p; ++j)
            per_feature[static_cast<std::size_t>(j)] =
                best_split_for_feature(X, targets, samples, j, min_samples_leaf);
    } else {
        for (int j = 0; j < p; ++j)
            per_feature[static_cast<std::size_t>(j)] =
                best_split_for_feature(X, targets, samples, j, min_samples_leaf);
    }
    Split best;
    for (int j = 0; j < p; ++j) {
        const Split& s = per_feature[static_cast<std::size_t>(j)];
        if (s.valid && (!best.valid || s.gain > best.gain)) best = s;
    }
    if (best.valid && !(best.gain > 0.0)) best.valid = false;
    return best;
}

// A grown-but-unsplit leaf awaiting expansion.
struct PendingLeaf {
    int node_id;
    std::size_t depth;
    std::vector<int> samples;
    Split split;  // cached best split, valid if expandable
};

double leaf_value_of(const std::vector<double>& targets, const std::vector<int>& samples,
                     double offset) {
    // Ascending row order, matching the brute-force reference exactly.
    double sum = 0;
    for (int s : samples) sum += targets[static_cast<std::size_t>(s)];
    return sum / (static_cast<double>(samples.size()) + offset);
}

void assign_region_ids(RegressionTree& tree) {
    int next = 0;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
        if (node.is_leaf) {
            node.region_id = next++;
        } else {
            // preorder: left before right
            stack.push_back(node.right);
            stack.push_back(node.left);
        }
    }
}

} // namespace

RegressionTree fit_tree(const Matrix& X, const std::vector<double>& targets,
                        const TreeConfig& config, ExecMode mode, double leaf_value_offset) {
    if (X.rows == 0) throw Error(Err::EmptyInput, "no rows");
    if (targets.size() != X.rows)
        throw Error(Err::LengthMismatch, "row/target count mismatch");
    if (config.max_leaves < 1 || config.max_depth < 1 || config.min_samples_leaf < 1)
        throw Error(Err::InvalidArgument, "tree config fields must be >= 1");
    for (double t : targets)
        if (!std::isfinite(t)) throw Error(Err::NonFiniteData, "target not finite");

    RegressionTree tree;
    std::vector<PendingLeaf> pending;

    std::vector<int> all(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) all[i] = static_cast<int>(i);

    tree.nodes.push_back(TreeNode{});
    tree.nodes[0].value = leaf_value_of(targets, all, leaf_value_offset);
    PendingLeaf root{0, 0, std::move(all), {}};
    if (config.max_leaves > 1 && root.depth < config.max_depth)
        root.split = best_split(X, targets, root.samples, config.min_samples_leaf, mode);
    pending.push_back(std::move(root));

    std::size_t n_leaves = 1;
    while (n_leaves < config.max_leaves) {
        // Pick the expandable pending leaf with the largest gain; ties go to
        // the oldest node id. Pending order is by node id already.
        int pick = -1;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            if (!pending[i].split.valid) continue;
            if (pick < 0 || pending[i].split.gain > pending[static_cast<std::size_t>(pick)].split.gain)
                pick = static_cast<int>(i);
        }
        if (pick < 0) break;

        PendingLeaf leaf = std::move(pending[static_cast<std::size_t>(pick)]);
        pending.erase(pending.begin() + pick);

        std::vector<int> left, right;
        left.reserve(leaf.samples.size());
        right.reserve(leaf.samples.size());
        for (int s : leaf.samples) {
            double v = X(static_cast<std::size_t>(s),
                         static_cast<std::size_t>(leaf.split.feature));
            (v <= leaf.split.threshold ? left : right).push_back(s);
        }

        const int left_id = static_cast<int>(tree.nodes.size());
        const int right_id = left_id + 1;
        tree.nodes.push_back(TreeNode{});
        tree.nodes.push_back(TreeNode{});
        tree.nodes[static_cast<std::size_t>(left_id)].value =
            leaf_value_of(targets, left, leaf_value_offset);
        tree.nodes[static_cast<std::size_t>(right_id)].value =
            leaf_value_of(targets, right, leaf_value_offset);

        TreeNode& parent = tree.nodes[static_cast<std::size_t>(leaf.node_id)];
        parent.is_leaf = false;
        parent.feature_index = leaf.split.feature;
        parent.threshold = leaf.split.threshold;
        parent.left = left_id;
        parent.right = right_id;
        parent.value = 0;
        ++n_leaves;

        const std::size_t child_depth = leaf.depth + 1;
        auto enqueue = [&](int child_id, std::vector<int>&& samples) {
            PendingLeaf child{child_id, child_depth, std::move(samples), {}};
            if (n_leaves < config.max_leaves && child_depth < config.max_depth)
                child.split =
                    best_split(X, targets, child.samples, config.min_samples_leaf, mode);
            pending.push_back(std::move(child));
        };
        enqueue(left_id, std::move(left));
        enqueue(right_id, std::move(right));
    }

    assign_region_ids(tree);
    return tree;
}

double predict_tree(const RegressionTree& tree, const double* row, std::size_t width) {
    int id = 0;
    while (true) {
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
        if (node.is_leaf) return node.value;
        if (static_cast<std::size_t>(node.feature_index) >= width)
            throw Error(Err::DimensionMismatch,
                        "row width " + std::to_string(width) + " does not cover feature " +
                            std::to_string(node.feature_index));
        id = row[node.feature_index] <= node.threshold ? node.left : node.right;
    }
}

double predict_tree(const RegressionTree& tree, const std::vector<double>& row) {
    return predict_tree(tree, row.data(), row.size());
}

namespace {

void serialize_node(const RegressionTree& tree, int id, std::string& out) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
    if (node.is_leaf) {
        out += "L " + fmt_double(node.value) + "\n";
    } else {
        out += "I " + std::to_string(node.feature_index) + " " + fmt_double(node.threshold) +
               "\n";
        serialize_node(tree, node.left, out);
        serialize_node(tree, node.right, out);
    }
}

int parse_node(const std::vector<std::string>& lines, std::size_t& pos, RegressionTree& tree) {
    if (pos >= lines.size()) throw Error(Err::SchemaMismatch, "truncated tree encoding");
    std::istringstream in(lines[pos++]);
    std::string tag;
    in >> tag;
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{});
    if (tag == "L") {
        double v;
        in >> v;
        tree.nodes[static_cast<std::size_t>(id)].value = v;
    } else if (tag == "I") {
        int feature;
        double threshold;
        in >> feature >> threshold;
        tree.nodes[static_cast<std::size_t>(id)].is_leaf = false;
        tree.nodes[static_cast<std::size_t>(id)].feature_index = feature;
        tree.nodes[static_cast<std::size_t>(id)].threshold = threshold;
        const int left = parse_node(lines, pos, tree);
        const int right = parse_node(lines, pos, tree);
        tree.nodes[static_cast<std::size_t>(id)].left = left;
        tree.nodes[static_cast<std::size_t>(id)].right = right;
    } else {
        throw Error(Err::SchemaMismatch, "bad tree node line: " + lines[pos - 1]);
    }
    return id;
}

} // namespace

std::string serialize_tree(const RegressionTree& tree) {
    std::string out;
    serialize_node(tree, 0, out);
    return out;
}

RegressionTree parse_tree_lines(const std::vector<std::string>& lines, std::size_t& pos) {
    RegressionTree tree;
    parse_node(lines, pos, tree);
    assign_region_ids(tree);
    return tree;
}

RegressionTree parse_tree(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    std::size_t pos = 0;
    RegressionTree tree = parse_tree_lines(lines, pos);
    if (pos != lines.size()) throw Error(Err::SchemaMismatch, "trailing tree data");
    return tree;
}

} // namespace sailfit
