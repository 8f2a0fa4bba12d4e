#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace triggerkit::autograd {

using mat = Eigen::MatrixXf;

// Handle into a tape; cheap to copy.
struct var {
    int id = -1;
};

// Reverse-mode tape over float matrices. One tape is built per training
// step (or per forward pass), then backward() accumulates gradients from a
// scalar root. Not thread-safe; use one tape per thread.
class tape {
public:
    var input(mat value, bool needs_grad = false);

    const mat& value(var v) const { return nodes_[v.id].value; }
    const mat& grad(var v) const;

    var matmul(var a, var b);      // A * B
    var matmul_nt(var a, var b);   // A * B^T (linear-layer convention)
    var add(var a, var b);         // same shape
    var add_rowwise(var a, var bias);  // bias is 1 x n, broadcast over rows
    var cmul(var a, var b);
    var scale(var a, float s);
    var sigmoid(var a);
    var tanh(var a);
    var relu(var a);
    var gelu(var a);
    var softmax_rows(var a);
    var layer_norm_rows(var a, var gain, var bias, float eps = 1e-5f);
    var slice_cols(var a, int begin, int len);
    var slice_rows(var a, int begin, int len);
    var concat_cols(const std::vector<var>& parts);
    var gather_rows(var table, std::vector<int> ids);

    // Binary cross-entropy on sigmoid(logits) against targets in {0,1},
    // summed over all entries. Probabilities are clamped to
    // [1e-7, 1 - 1e-7] before the logs. `pos_weight` multiplies the
    // positive term elementwise (pass an all-ones matrix for plain BCE).
    var bce_with_logits(var logits, mat targets, mat pos_weight);

    // Root must be 1x1. Seeds d(root)=1 and sweeps the tape in reverse.
    void backward(var root);

    std::size_t size() const { return nodes_.size(); }

private:
    struct node {
        mat value;
        mat grad;  // empty until touched
        bool needs_grad = false;
        std::function<void(tape&, const node&)> backprop;  // may be null (leaf)
    };

    std::vector<node> nodes_;

    var emplace(mat value, bool needs_grad, std::function<void(tape&, const node&)> backprop);
    void accum(int id, const mat& delta);
    friend struct node_access;
};

}  // namespace triggerkit::autograd
