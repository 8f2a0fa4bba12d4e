#include "triggerkit/autograd.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace triggerkit::autograd {

namespace {
constexpr float kProbEps = 1e-7f;  // clamp for log arguments
constexpr float kGeluK0 = 0.7978845608028654f;  // sqrt(2/pi)
constexpr float kGeluK1 = 0.044715f;
}  // namespace

var tape::emplace(mat value, bool needs_grad,
                  std::function<void(tape&, const node&)> backprop) {
    node n;
    n.value = std::move(value);
    n.needs_grad = needs_grad;
    n.backprop = std::move(backprop);
    nodes_.push_back(std::move(n));
    return var{static_cast<int>(nodes_.size()) - 1};
}

var tape::input(mat value, bool needs_grad) {
    return emplace(std::move(value), needs_grad, nullptr);
}

const mat& tape::grad(var v) const {
    const node& n = nodes_[v.id];
    if (n.grad.size() == 0)
        throw std::logic_error("autograd: gradient was never accumulated for this var");
    return n.grad;
}

void tape::accum(int id, const mat& delta) {
    node& n = nodes_[id];
    if (!n.needs_grad) return;
    if (n.grad.size() == 0) n.grad = mat::Zero(n.value.rows(), n.value.cols());
    n.grad += delta;
}

var tape::matmul(var a, var b) {
    const bool ng = nodes_[a.id].needs_grad || nodes_[b.id].needs_grad;
    mat out = value(a) * value(b);
    return emplace(std::move(out), ng, [a, b](tape& t, const node& n) {
        t.accum(a.id, n.grad * t.value(b).transpose());
        t.accum(b.id, t.value(a).transpose() * n.grad);
    });
}

var tape::matmul_nt(var a, var b) {
    const bool ng = nodes_[a.id].needs_grad || nodes_[b.id].needs_grad;
    mat out = value(a) * value(b).transpose();
    return emplace(std::move(out), ng, [a, b](tape& t, const node& n) {
        t.accum(a.id, n.grad * t.value(b));
        t.accum(b.id, n.grad.transpose() * t.value(a));
    });
}

var tape::add(var a, var b) {
    const bool ng = nodes_[a.id].needs_grad || nodes_[b.id].needs_grad;
    mat out = value(a) + value(b);
    return emplace(std::move(out), ng, [a, b](tape& t, const node& n) {
        t.accum(a.id, n.grad);
        t.accum(b.id, n.grad);
    });
}

var tape::add_rowwise(var a, var bias) {
    const bool ng = nodes_[a.id].needs_grad || nodes_[bias.id].needs_grad;
    mat out = value(a).rowwise() + value(bias).row(0);
    return emplace(std::move(out), ng, [a, bias](tape& t, const node& n) {
        t.accum(a.id, n.grad);
        t.accum(bias.id, n.grad.colwise().sum());
    });
}

var tape::cmul(var a, var b) {
    const bool ng = nodes_[a.id].needs_grad || nodes_[b.id].needs_grad;
    mat out = value(a).cwiseProduct(value(b));
    return emplace(std::move(out), ng, [a, b](tape& t, const node& n) {
        t.accum(a.id, n.grad.cwiseProduct(t.value(b)));
        t.accum(b.id, n.grad.cwiseProduct(t.value(a)));
    });
}

var tape::scale(var a, float s) {
    const bool ng = nodes_[a.id].needs_grad;
    mat out = value(a) * s;
    return emplace(std::move(out), ng, [a, s](tape& t, const node& n) {
        t.accum(a.id, n.grad * s);
    });
}

var tape::sigmoid(var a) {
    const bool ng = nodes_[a.id].needs_grad;
    mat out = value(a).unaryExpr([](float x) { return 1.0f / (1.0f + std::exp(-x)); });
    return emplace(std::move(out), ng, [a](tape& t, const node& n) {
        const mat& s = n.value;
        t.accum(a.id, n.grad.cwiseProduct(s.cwiseProduct(mat::Ones(s.rows(), s.cols()) - s)));
    });
}

var tape::tanh(var a) {
    const bool ng = nodes_[a.id].needs_grad;
    mat out = value(a).unaryExpr([](float x) { return std::tanh(x); });
    return emplace(std::move(out), ng, [a](tape& t, const node& n) {
        const mat& y = n.value;
        t.accum(a.id, n.grad.cwiseProduct(mat::Ones(y.rows(), y.cols()) - y.cwiseProduct(y)));
    });
}

var tape::relu(var a) {
    const bool ng = nodes_[a.id].needs_grad;
    mat out = value(a).cwiseMax(0.0f);
    return emplace(std::move(out), ng, [a](tape& t, const node& n) {
        const mat mask = (t.value(a).array() > 0.0f).cast<float>().matrix();
        t.accum(a.id, n.grad.cwiseProduct(mask));
    });
}

var tape::gelu(var a) {
    const bool ng = nodes_[a.id].needs_grad;
    mat out = value(a).unaryExpr([](float x) {
        return 0.5f * x * (1.0f + std::tanh(kGeluK0 * (x + kGeluK1 * x * x * x)));
    });
    return emplace(std::move(out), ng, [a](tape& t, const node& n) {
        const mat deriv = t.value(a).unaryExpr([](float x) {
            const float u = kGeluK0 * (x + kGeluK1 * x * x * x);
            const float th = std::tanh(u);
            const float du = kGeluK0 * (1.0f + 3.0f * kGeluK1 * x * x);
            return 0.5f * (1.0f + th) + 0.5f * x * (1.0f - th * th) * du;
        });
        t.accum(a.id, n.grad.cwiseProduct(deriv));
    });
}

var tape::softmax_rows(var a) {
    const bool ng = nodes_[a.id].needs_grad;
    mat out = value(a);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        const float mx = out.row(r).maxCoeff();
        out.row(r) = (out.row(r).array() - mx).exp();
        out.row(r) /= out.row(r).sum();
    }
    return emplace(std::move(out), ng, [a](tape& t, const node& n) {
        const mat& s = n.value;
        mat dx(s.rows(), s.cols());
        for (Eigen::Index r = 0; r < s.rows(); ++r) {
            const float dot = n.grad.row(r).cwiseProduct(s.row(r)).sum();
            dx.row(r) = s.row(r).cwiseProduct(n.grad.row(r).array().matrix() -
                                              mat::Constant(1, s.cols(), dot));
        }
        t.accum(a.id, dx);
    });
}

var tape::layer_norm_rows(var a, var gain, var bias, float eps) {
    const bool ng =
        nodes_[a.id].needs_grad || nodes_[gain.id].needs_grad || nodes_[bias.id].needs_grad;
    const mat& x = value(a);
    const auto cols = static_cast<float>(x.cols());
    mat xhat(x.rows(), x.cols());
    Eigen::VectorXf inv_std(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        const float mu = x.row(r).mean();
        const float var_ = (x.row(r).array() - mu).square().sum() / cols;
        inv_std(r) = 1.0f / std::sqrt(var_ + eps);
        xhat.row(r) = (x.row(r).array() - mu).matrix() * inv_std(r);
    }
    mat out = xhat * value(gain).row(0).asDiagonal();
    out = out.rowwise() + value(bias).row(0);
    return emplace(std::move(out), ng,
                   [a, gain, bias, xhat = std::move(xhat), inv_std = std::move(inv_std),
                    cols](tape& t, const node& n) {
                       // d(gain), d(bias) pool over rows; d(x) per row.
                       t.accum(gain.id, n.grad.cwiseProduct(xhat).colwise().sum());
                       t.accum(bias.id, n.grad.colwise().sum());
                       mat dxhat = n.grad * t.value(gain).row(0).asDiagonal();
                       mat dx(dxhat.rows(), dxhat.cols());
                       for (Eigen::Index r = 0; r < dxhat.rows(); ++r) {
                           const float m1 = dxhat.row(r).sum() / cols;
                           const float m2 = dxhat.row(r).cwiseProduct(xhat.row(r)).sum() / cols;
                           dx.row(r) = ((dxhat.row(r).array() - m1) -
                                        xhat.row(r).array() * m2) *
                                       inv_std(r);
                       }
                       t.accum(a.id, dx);
                   });
}

var tape::slice_cols(var a, int begin, int len) {
    const bool ng = nodes_[a.id].needs_grad;
    mat out = value(a).middleCols(begin, len);
    return emplace(std::move(out), ng, [a, begin, len](tape& t, const node& n) {
        mat full = mat::Zero(t.value(a).rows(), t.value(a).cols());
        full.middleCols(begin, len) = n.grad;
        t.accum(a.id, full);
    });
}

var tape::slice_rows(var a, int begin, int len) {
    const bool ng = nodes_[a.id].needs_grad;
    mat out = value(a).middleRows(begin, len);
    return emplace(std::move(out), ng, [a, begin, len](tape& t, const node& n) {
        mat full = mat::Zero(t.value(a).rows(), t.value(a).cols());
        full.middleRows(begin, len) = n.grad;
        t.accum(a.id, full);
    });
}

var tape::concat_cols(const std::vector<var>& parts) {
    assert(!parts.empty());
    bool ng = false;
    Eigen::Index rows = value(parts[0]).rows();
    Eigen::Index cols = 0;
    for (var p : parts) {
        ng = ng || nodes_[p.id].needs_grad;
        cols += value(p).cols();
    }
    mat out(rows, cols);
    Eigen::Index at = 0;
    for (var p : parts) {
        out.middleCols(at, value(p).cols()) = value(p);
        at += value(p).cols();
    }
    return emplace(std::move(out), ng, [parts](tape& t, const node& n) {
        Eigen::Index at = 0;
        for (var p : parts) {
            const auto w = t.value(p).cols();
            t.accum(p.id, n.grad.middleCols(at, w));
            at += w;
        }
    });
}

var tape::gather_rows(var table, std::vector<int> ids) {
    const bool ng = nodes_[table.id].needs_grad;
    const mat& src = value(table);
    mat out(static_cast<Eigen::Index>(ids.size()), src.cols());
    for (std::size_t i = 0; i < ids.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = src.row(ids[i]);
    return emplace(std::move(out), ng, [table, ids = std::move(ids)](tape& t, const node& n) {
        mat full = mat::Zero(t.value(table).rows(), t.value(table).cols());
        for (std::size_t i = 0; i < ids.size(); ++i)
            full.row(ids[i]) += n.grad.row(static_cast<Eigen::Index>(i));
        t.accum(table.id, full);
    });
}

var tape::bce_with_logits(var logits, mat targets, mat pos_weight) {
    const mat& z = value(logits);
    assert(z.rows() == targets.rows() && z.cols() == targets.cols());
    assert(z.rows() == pos_weight.rows() && z.cols() == pos_weight.cols());
    mat probs = z.unaryExpr([](float x) { return 1.0f / (1.0f + std::exp(-x)); });
    double total = 0.0;
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
        for (Eigen::Index c = 0; c < z.cols(); ++c) {
            const double p =
                std::min(std::max(static_cast<double>(probs(r, c)),
                                  static_cast<double>(kProbEps)),
                         1.0 - static_cast<double>(kProbEps));
            const double t_ = targets(r, c);
            const double w = pos_weight(r, c);
            total += -(w * t_ * std::log(p) + (1.0 - t_) * std::log1p(-p));
        }
    }
    mat out(1, 1);
    out(0, 0) = static_cast<float>(total);
    const bool ng = nodes_[logits.id].needs_grad;
    return emplace(
        std::move(out), ng,
        [logits, targets = std::move(targets), pos_weight = std::move(pos_weight),
         probs = std::move(probs)](tape& t, const node& n) {
            // dL/dz = -w*t*(1-p) + (1-t)*p, zeroed where the clamp saturates.
            mat dz(probs.rows(), probs.cols());
            for (Eigen::Index r = 0; r < probs.rows(); ++r) {
                for (Eigen::Index c = 0; c < probs.cols(); ++c) {
                    const float p = probs(r, c);
                    if (p <= kProbEps || p >= 1.0f - kProbEps) {
                        dz(r, c) = 0.0f;
                        continue;
                    }
                    dz(r, c) = -pos_weight(r, c) * targets(r, c) * (1.0f - p) +
                               (1.0f - targets(r, c)) * p;
                }
            }
            t.accum(logits.id, n.grad(0, 0) * dz);
        });
}

void tape::backward(var root) {
    node& r = nodes_[root.id];
    if (r.value.rows() != 1 || r.value.cols() != 1)
        throw std::logic_error("autograd: backward root must be scalar");
    r.grad = mat::Ones(1, 1);
    for (int i = root.id; i >= 0; --i) {
        const node& n = nodes_[i];
        if (n.backprop && n.needs_grad && n.grad.size() != 0) n.backprop(*this, n);
    }
}

}  // namespace triggerkit::autograd
