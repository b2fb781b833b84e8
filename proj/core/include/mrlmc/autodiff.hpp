#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mrlmc/common.hpp"
#include "mrlmc/rng.hpp"

namespace mrlmc::ad {

/// Reverse-mode autodiff over dense double tensors. Each forward op records
/// its parents and a pull-back closure; backward() runs the tape in reverse
/// topological order. Double precision throughout so central-difference
/// checks at step 1e-4 resolve relative errors below 1e-4.
struct Node {
    std::vector<std::size_t> shape;
    std::vector<double> value;
    std::vector<double> grad;
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> pull;
    bool requires_grad = false;

    std::size_t size() const {
        std::size_t n = 1;
        for (auto s : shape) n *= s;
        return n;
    }
};

class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::shared_ptr<Node> n) : node_(std::move(n)) {}

    static Tensor leaf(std::vector<std::size_t> shape, std::vector<double> value,
                       bool requires_grad = false);
    static Tensor scalar(double v);
    static Tensor zeros(std::vector<std::size_t> shape, bool requires_grad = false);

    const std::vector<std::size_t>& shape() const { return node_->shape; }
    const std::vector<double>& value() const { return node_->value; }
    const std::vector<double>& grad() const { return node_->grad; }
    std::vector<double>& mutable_value() { return node_->value; }
    std::size_t size() const { return node_->size(); }
    double item() const;
    bool defined() const { return node_ != nullptr; }

    std::shared_ptr<Node> node() const { return node_; }

private:
    std::shared_ptr<Node> node_;
};

/// Seeds grad of `loss` (a scalar) with 1 and accumulates into every
/// reachable leaf with requires_grad.
void backward(const Tensor& loss);

// elementwise
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double k);
Tensor add_scalar(const Tensor& a, double k);
Tensor relu(const Tensor& a);
/// Elementwise max(alpha*x, x); with alpha in (0,1] this is a leaky rectifier.
Tensor leaky_max(const Tensor& a, double alpha);
Tensor log_t(const Tensor& a);
Tensor exp_t(const Tensor& a);
/// x^p for real p; x must stay positive where p is non-integral.
Tensor pow_t(const Tensor& a, double p);

// reductions and shape
Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
Tensor reshape(const Tensor& a, std::vector<std::size_t> shape);
Tensor concat(const std::vector<Tensor>& parts); // 1-D concat
Tensor pick(const Tensor& a, std::size_t index); // scalar a[index]
Tensor slice_cols(const Tensor& a, std::size_t c0, std::size_t c1); // [R,C] -> [R,c1-c0]
Tensor concat_cols(const std::vector<Tensor>& parts);               // inverse of slice_cols

// linear algebra
Tensor matmul(const Tensor& a, const Tensor& b);    // [m,k] x [k,n]
Tensor matmul_nt(const Tensor& a, const Tensor& b); // [m,k] x [n,k]^T -> [m,n]
/// Row-wise affine map: x [R,C] -> x*W + b with W [C,N], b [N].
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);

/// Same-length 1-D convolution along time. x [Cin,T], w [Cout,Cin,K] (K odd),
/// b [Cout], zero padding (K-1)*dilation/2 per side.
Tensor conv1d(const Tensor& x, const Tensor& w, const Tensor& b, std::size_t dilation);

/// Normalize each row of [R,C] (or the whole vector for 1-D) to zero mean,
/// unit variance. No learned affine.
Tensor layer_norm(const Tensor& a, double eps = 1e-5);

/// Softmax over each row of [R,C].
Tensor softmax_rows(const Tensor& a);

/// [C,T] -> [C], average over time.
Tensor global_avg_pool(const Tensor& a);

/// Cosine similarity of two 1-D tensors; throws NumericError on zero norm.
Tensor cosine_sim(const Tensor& a, const Tensor& b);

/// Inverted-dropout; identity when train is false. Mask drawn from rng.
Tensor dropout(const Tensor& a, double rate, bool train, Rng& rng);

void check_finite(const Tensor& t, const std::string& what);

} // namespace mrlmc::ad
