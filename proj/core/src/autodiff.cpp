#include "mrlmc/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace mrlmc::ad {

namespace {

std::shared_ptr<Node> make_node(std::vector<std::size_t> shape,
                                std::vector<std::shared_ptr<Node>> parents) {
    auto n = std::make_shared<Node>();
    n->shape = std::move(shape);
    n->parents = std::move(parents);
    for (const auto& p : n->parents)
        if (p->requires_grad) n->requires_grad = true;
    n->value.resize(n->size());
    n->grad.assign(n->size(), 0.0);
    return n;
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (a.shape() != b.shape())
        throw NumericError(std::string(op) + ": shape mismatch");
}

} // namespace

Tensor Tensor::leaf(std::vector<std::size_t> shape, std::vector<double> value,
                    bool requires_grad) {
    auto n = std::make_shared<Node>();
    n->shape = std::move(shape);
    n->value = std::move(value);
    if (n->value.size() != n->size()) throw NumericError("leaf: value size mismatch");
    n->grad.assign(n->size(), 0.0);
    n->requires_grad = requires_grad;
    return Tensor(n);
}

Tensor Tensor::scalar(double v) { return leaf({1}, {v}); }

Tensor Tensor::zeros(std::vector<std::size_t> shape, bool requires_grad) {
    auto n = std::make_shared<Node>();
    n->shape = std::move(shape);
    n->value.assign(n->size(), 0.0);
    n->grad.assign(n->size(), 0.0);
    n->requires_grad = requires_grad;
    return Tensor(n);
}

double Tensor::item() const {
    if (node_->size() != 1) throw NumericError("item: tensor is not scalar");
    return node_->value[0];
}

void backward(const Tensor& loss) {
    if (loss.size() != 1) throw NumericError("backward: loss must be scalar");

    std::vector<Node*> order;
    std::unordered_set<Node*> seen;
    // iterative post-order DFS
    std::vector<std::pair<Node*, std::size_t>> stack{{loss.node().get(), 0}};
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next == 0 && seen.count(node)) {
            stack.pop_back();
            continue;
        }
        if (next < node->parents.size()) {
            Node* child = node->parents[next++].get();
            if (!seen.count(child)) stack.emplace_back(child, 0);
        } else {
            seen.insert(node);
            order.push_back(node);
            stack.pop_back();
        }
    }

    for (Node* n : order)
        if (!n->pull) continue; // leaves keep accumulated grads
    loss.node()->grad.assign(1, 1.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if ((*it)->pull && (*it)->requires_grad) (*it)->pull(**it);
}

Tensor add(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "add");
    auto n = make_node(a.shape(), {a.node(), b.node()});
    for (std::size_t i = 0; i < n->size(); ++i)
        n->value[i] = a.value()[i] + b.value()[i];
    n->pull = [](Node& self) {
        for (int p = 0; p < 2; ++p)
            if (self.parents[p]->requires_grad)
                for (std::size_t i = 0; i < self.grad.size(); ++i)
                    self.parents[p]->grad[i] += self.grad[i];
    };
    return Tensor(n);
}

Tensor sub(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "sub");
    auto n = make_node(a.shape(), {a.node(), b.node()});
    for (std::size_t i = 0; i < n->size(); ++i)
        n->value[i] = a.value()[i] - b.value()[i];
    n->pull = [](Node& self) {
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
            if (self.parents[0]->requires_grad) self.parents[0]->grad[i] += self.grad[i];
            if (self.parents[1]->requires_grad) self.parents[1]->grad[i] -= self.grad[i];
        }
    };
    return Tensor(n);
}

Tensor mul(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "mul");
    auto n = make_node(a.shape(), {a.node(), b.node()});
    for (std::size_t i = 0; i < n->size(); ++i)
        n->value[i] = a.value()[i] * b.value()[i];
    n->pull = [](Node& self) {
        auto& pa = *self.parents[0];
        auto& pb = *self.parents[1];
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
            if (pa.requires_grad) pa.grad[i] += self.grad[i] * pb.value[i];
            if (pb.requires_grad) pb.grad[i] += self.grad[i] * pa.value[i];
        }
    };
    return Tensor(n);
}

Tensor scale(const Tensor& a, double k) {
    auto n = make_node(a.shape(), {a.node()});
    for (std::size_t i = 0; i < n->size(); ++i) n->value[i] = a.value()[i] * k;
    n->pull = [k](Node& self) {
        for (std::size_t i = 0; i < self.grad.size(); ++i)
            self.parents[0]->grad[i] += self.grad[i] * k;
    };
    return Tensor(n);
}

Tensor add_scalar(const Tensor& a, double k) {
    auto n = make_node(a.shape(), {a.node()});
    for (std::size_t i = 0; i < n->size(); ++i) n->value[i] = a.value()[i] + k;
    n->pull = [](Node& self) {
        for (std::size_t i = 0; i < self.grad.size(); ++i)
            self.parents[0]->grad[i] += self.grad[i];
    };
    return Tensor(n);
}

Tensor relu(const Tensor& a) {
    auto n = make_node(a.shape(), {a.node()});
    for (std::size_t i = 0; i < n->size(); ++i)
        n->value[i] = a.value()[i] > 0.0 ? a.value()[i] : 0.0;
    n->pull = [](Node& self) {
        for (std::size_t i = 0; i < self.grad.size(); ++i)
            if (self.parents[0]->value[i] > 0.0)
                self.parents[0]->grad[i] += self.grad[i];
    };
    return Tensor(n);
}

Tensor leaky_max(const Tensor& a, double alpha) {
    auto n = make_node(a.shape(), {a.node()});
    for (std::size_t i = 0; i < n->size(); ++i) {
        double v = a.value()[i];
        n->value[i] = std::max(alpha * v, v);
    }
    n->pull = [alpha](Node& self) {
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
            double v = self.parents[0]->value[i];
            self.parents[0]->grad[i] += self.grad[i] * (v >= 0.0 ? 1.0 : alpha);
        }
    };
    return Tensor(n);
}

Tensor log_t(const Tensor& a) {
    auto n = make_node(a.shape(), {a.node()});
    for (std::size_t i = 0; i < n->size(); ++i) {
        if (a.value()[i] <= 0.0) throw NumericError("log: non-positive argument");
        n->value[i] = std::log(a.value()[i]);
    }
    n->pull = [](Node& self) {
        for (std::size_t i = 0; i < self.grad.size(); ++i)
            self.parents[0]->grad[i] += self.grad[i] / self.parents[0]->value[i];
    };
    return Tensor(n);
}

Tensor exp_t(const Tensor& a) {
    auto n = make_node(a.shape(), {a.node()});
    for (std::size_t i = 0; i < n->size(); ++i) n->value[i] = std::exp(a.value()[i]);
    n->pull = [](Node& self) {
        for (std::size_t i = 0; i < self.grad.size(); ++i)
            self.parents[0]->grad[i] += self.grad[i] * self.value[i];
    };
    return Tensor(n);
}

Tensor pow_t(const Tensor& a, double p) {
    auto n = make_node(a.shape(), {a.node()});
    for (std::size_t i = 0; i < n->size(); ++i) n->value[i] = std::pow(a.value()[i], p);
    n->pull = [p](Node& self) {
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
            double x = self.parents[0]->value[i];
            self.parents[0]->grad[i] += self.grad[i] * p * std::pow(x, p - 1.0);
        }
    };
    return Tensor(n);
}

Tensor sum(const Tensor& a) {
    auto n = make_node({1}, {a.node()});
    double acc = 0.0;
    for (double v : a.value()) acc += v;
    n->value[0] = acc;
    n->pull = [](Node& self) {
        for (auto& g : self.parents[0]->grad) g += self.grad[0];
    };
    return Tensor(n);
}

Tensor mean(const Tensor& a) { return scale(sum(a), 1.0 / static_cast<double>(a.size())); }

Tensor reshape(const Tensor& a, std::vector<std::size_t> shape) {
    auto n = make_node(std::move(shape), {a.node()});
    if (n->size() != a.size()) throw NumericError("reshape: element count mismatch");
    n->value = a.value();
    n->pull = [](Node& self) {
        for (std::size_t i = 0; i < self.grad.size(); ++i)
            self.parents[0]->grad[i] += self.grad[i];
    };
    return Tensor(n);
}

Tensor concat(const std::vector<Tensor>& parts) {
    if (parts.empty()) throw NumericError("concat: no parts");
    std::vector<std::shared_ptr<Node>> parents;
    std::size_t total = 0;
    for (const auto& p : parts) {
        parents.push_back(p.node());
        total += p.size();
    }
    auto n = make_node({total}, std::move(parents));
    std::size_t off = 0;
    for (const auto& p : parts) {
        std::copy(p.value().begin(), p.value().end(),
                  n->value.begin() + static_cast<std::ptrdiff_t>(off));
        off += p.size();
    }
    n->pull = [](Node& self) {
        std::size_t off2 = 0;
        for (auto& p : self.parents) {
            if (p->requires_grad)
                for (std::size_t i = 0; i < p->grad.size(); ++i)
                    p->grad[i] += self.grad[off2 + i];
            off2 += p->size();
        }
    };
    return Tensor(n);
}

Tensor pick(const Tensor& a, std::size_t index) {
    if (index >= a.size()) throw NumericError("pick: index out of range");
    auto n = make_node({1}, {a.node()});
    n->value[0] = a.value()[index];
    n->pull = [index](Node& self) { self.parents[0]->grad[index] += self.grad[0]; };
    return Tensor(n);
}

Tensor slice_cols(const Tensor& a, std::size_t c0, std::size_t c1) {
    if (a.shape().size() != 2 || c1 > a.shape()[1] || c0 >= c1)
        throw NumericError("slice_cols: bad range");
    const std::size_t rows = a.shape()[0], cols = a.shape()[1], w = c1 - c0;
    auto n = make_node({rows, w}, {a.node()});
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < w; ++c)
            n->value[r * w + c] = a.value()[r * cols + c0 + c];
    n->pull = [rows, cols, w, c0](Node& self) {
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < w; ++c)
                self.parents[0]->grad[r * cols + c0 + c] += self.grad[r * w + c];
    };
    return Tensor(n);
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
    if (parts.empty()) throw NumericError("concat_cols: no parts");
    const std::size_t rows = parts[0].shape()[0];
    std::size_t cols = 0;
    std::vector<std::shared_ptr<Node>> parents;
    for (const auto& p : parts) {
        if (p.shape().size() != 2 || p.shape()[0] != rows)
            throw NumericError("concat_cols: row mismatch");
        cols += p.shape()[1];
        parents.push_back(p.node());
    }
    auto n = make_node({rows, cols}, std::move(parents));
    std::size_t off = 0;
    for (const auto& p : parts) {
        const std::size_t w = p.shape()[1];
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < w; ++c)
                n->value[r * cols + off + c] = p.value()[r * w + c];
        off += w;
    }
    n->pull = [rows, cols](Node& self) {
        std::size_t off2 = 0;
        for (auto& p : self.parents) {
            const std::size_t w = p->shape[1];
            if (p->requires_grad)
                for (std::size_t r = 0; r < rows; ++r)
                    for (std::size_t c = 0; c < w; ++c)
                        p->grad[r * w + c] += self.grad[r * cols + off2 + c];
            off2 += w;
        }
    };
    return Tensor(n);
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.shape().size() != 2 || b.shape().size() != 2 || a.shape()[1] != b.shape()[0])
        throw NumericError("matmul: shape mismatch");
    const std::size_t m = a.shape()[0], k = a.shape()[1], n_cols = b.shape()[1];
    auto n = make_node({m, n_cols}, {a.node(), b.node()});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double av = a.value()[i * k + kk];
            for (std::size_t j = 0; j < n_cols; ++j)
                n->value[i * n_cols + j] += av * b.value()[kk * n_cols + j];
        }
    n->pull = [m, k, n_cols](Node& self) {
        auto& pa = *self.parents[0];
        auto& pb = *self.parents[1];
        if (pa.requires_grad)
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n_cols; ++j) {
                    const double g = self.grad[i * n_cols + j];
                    for (std::size_t kk = 0; kk < k; ++kk)
                        pa.grad[i * k + kk] += g * pb.value[kk * n_cols + j];
                }
        if (pb.requires_grad)
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t kk = 0; kk < k; ++kk) {
                    const double av = pa.value[i * k + kk];
                    for (std::size_t j = 0; j < n_cols; ++j)
                        pb.grad[kk * n_cols + j] += av * self.grad[i * n_cols + j];
                }
    };
    return Tensor(n);
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
    if (a.shape().size() != 2 || b.shape().size() != 2 || a.shape()[1] != b.shape()[1])
        throw NumericError("matmul_nt: shape mismatch");
    const std::size_t m = a.shape()[0], k = a.shape()[1], n_rows = b.shape()[0];
    auto n = make_node({m, n_rows}, {a.node(), b.node()});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n_rows; ++j) {
            double acc = 0.0;
            for (std::size_t kk = 0; kk < k; ++kk)
                acc += a.value()[i * k + kk] * b.value()[j * k + kk];
            n->value[i * n_rows + j] = acc;
        }
    n->pull = [m, k, n_rows](Node& self) {
        auto& pa = *self.parents[0];
        auto& pb = *self.parents[1];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n_rows; ++j) {
                const double g = self.grad[i * n_rows + j];
                if (g == 0.0) continue;
                for (std::size_t kk = 0; kk < k; ++kk) {
                    if (pa.requires_grad) pa.grad[i * k + kk] += g * pb.value[j * k + kk];
                    if (pb.requires_grad) pb.grad[j * k + kk] += g * pa.value[i * k + kk];
                }
            }
    };
    return Tensor(n);
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
    Tensor y = matmul(x, w);
    const std::size_t rows = y.shape()[0], cols = y.shape()[1];
    if (b.size() != cols) throw NumericError("linear: bias size mismatch");
    auto n = make_node({rows, cols}, {y.node(), b.node()});
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            n->value[r * cols + c] = y.value()[r * cols + c] + b.value()[c];
    n->pull = [rows, cols](Node& self) {
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                const double g = self.grad[r * cols + c];
                if (self.parents[0]->requires_grad) self.parents[0]->grad[r * cols + c] += g;
                if (self.parents[1]->requires_grad) self.parents[1]->grad[c] += g;
            }
    };
    return Tensor(n);
}

Tensor conv1d(const Tensor& x, const Tensor& w, const Tensor& b, std::size_t dilation) {
    if (x.shape().size() != 2 || w.shape().size() != 3)
        throw NumericError("conv1d: expects x [Cin,T], w [Cout,Cin,K]");
    const std::size_t c_in = x.shape()[0], t_len = x.shape()[1];
    const std::size_t c_out = w.shape()[0], kernel = w.shape()[2];
    if (w.shape()[1] != c_in) throw NumericError("conv1d: channel mismatch");
    if (kernel % 2 == 0) throw NumericError("conv1d: kernel must be odd");
    if (b.size() != c_out) throw NumericError("conv1d: bias size mismatch");
    const auto half = static_cast<std::ptrdiff_t>((kernel - 1) / 2 * dilation);

    auto n = make_node({c_out, t_len}, {x.node(), w.node(), b.node()});
    for (std::size_t co = 0; co < c_out; ++co)
        for (std::size_t t = 0; t < t_len; ++t) {
            double acc = b.value()[co];
            for (std::size_t ci = 0; ci < c_in; ++ci)
                for (std::size_t k = 0; k < kernel; ++k) {
                    const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t) - half +
                                               static_cast<std::ptrdiff_t>(k * dilation);
                    if (src < 0 || src >= static_cast<std::ptrdiff_t>(t_len)) continue;
                    acc += w.value()[(co * c_in + ci) * kernel + k] *
                           x.value()[ci * t_len + static_cast<std::size_t>(src)];
                }
            n->value[co * t_len + t] = acc;
        }
    n->pull = [c_in, t_len, c_out, kernel, dilation, half](Node& self) {
        auto& px = *self.parents[0];
        auto& pw = *self.parents[1];
        auto& pb = *self.parents[2];
        for (std::size_t co = 0; co < c_out; ++co)
            for (std::size_t t = 0; t < t_len; ++t) {
                const double g = self.grad[co * t_len + t];
                if (g == 0.0) continue;
                if (pb.requires_grad) pb.grad[co] += g;
                for (std::size_t ci = 0; ci < c_in; ++ci)
                    for (std::size_t k = 0; k < kernel; ++k) {
                        const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t) - half +
                                                   static_cast<std::ptrdiff_t>(k * dilation);
                        if (src < 0 || src >= static_cast<std::ptrdiff_t>(t_len)) continue;
                        const std::size_t xi = ci * t_len + static_cast<std::size_t>(src);
                        const std::size_t wi = (co * c_in + ci) * kernel + k;
                        if (pw.requires_grad) pw.grad[wi] += g * px.value[xi];
                        if (px.requires_grad) px.grad[xi] += g * pw.value[wi];
                    }
            }
    };
    return Tensor(n);
}

Tensor layer_norm(const Tensor& a, double eps) {
    const bool is_2d = a.shape().size() == 2;
    const std::size_t rows = is_2d ? a.shape()[0] : 1;
    const std::size_t cols = is_2d ? a.shape()[1] : a.size();

    auto n = make_node(a.shape(), {a.node()});
    std::vector<double> inv_sigma(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        double mu = 0.0;
        for (std::size_t c = 0; c < cols; ++c) mu += a.value()[r * cols + c];
        mu /= static_cast<double>(cols);
        double var = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            const double d = a.value()[r * cols + c] - mu;
            var += d * d;
        }
        var /= static_cast<double>(cols);
        inv_sigma[r] = 1.0 / std::sqrt(var + eps);
        for (std::size_t c = 0; c < cols; ++c)
            n->value[r * cols + c] = (a.value()[r * cols + c] - mu) * inv_sigma[r];
    }
    n->pull = [rows, cols, inv_sigma](Node& self) {
        for (std::size_t r = 0; r < rows; ++r) {
            double g_mean = 0.0, gy_mean = 0.0;
            for (std::size_t c = 0; c < cols; ++c) {
                const std::size_t i = r * cols + c;
                g_mean += self.grad[i];
                gy_mean += self.grad[i] * self.value[i];
            }
            g_mean /= static_cast<double>(cols);
            gy_mean /= static_cast<double>(cols);
            for (std::size_t c = 0; c < cols; ++c) {
                const std::size_t i = r * cols + c;
                self.parents[0]->grad[i] +=
                    inv_sigma[r] * (self.grad[i] - g_mean - self.value[i] * gy_mean);
            }
        }
    };
    return Tensor(n);
}

Tensor softmax_rows(const Tensor& a) {
    if (a.shape().size() > 2) throw NumericError("softmax_rows: expects 1-D or 2-D");
    const bool is_2d = a.shape().size() == 2;
    const std::size_t rows = is_2d ? a.shape()[0] : 1;
    const std::size_t cols = is_2d ? a.shape()[1] : a.size();

    auto n = make_node(a.shape(), {a.node()});
    for (std::size_t r = 0; r < rows; ++r) {
        double mx = a.value()[r * cols];
        for (std::size_t c = 1; c < cols; ++c) mx = std::max(mx, a.value()[r * cols + c]);
        double denom = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            const double e = std::exp(a.value()[r * cols + c] - mx);
            n->value[r * cols + c] = e;
            denom += e;
        }
        for (std::size_t c = 0; c < cols; ++c) n->value[r * cols + c] /= denom;
    }
    n->pull = [rows, cols](Node& self) {
        for (std::size_t r = 0; r < rows; ++r) {
            double dot = 0.0;
            for (std::size_t c = 0; c < cols; ++c) {
                const std::size_t i = r * cols + c;
                dot += self.grad[i] * self.value[i];
            }
            for (std::size_t c = 0; c < cols; ++c) {
                const std::size_t i = r * cols + c;
                self.parents[0]->grad[i] += self.value[i] * (self.grad[i] - dot);
            }
        }
    };
    return Tensor(n);
}

Tensor global_avg_pool(const Tensor& a) {
    if (a.shape().size() != 2) throw NumericError("global_avg_pool: expects [C,T]");
    const std::size_t c_len = a.shape()[0], t_len = a.shape()[1];
    auto n = make_node({c_len}, {a.node()});
    for (std::size_t c = 0; c < c_len; ++c) {
        double acc = 0.0;
        for (std::size_t t = 0; t < t_len; ++t) acc += a.value()[c * t_len + t];
        n->value[c] = acc / static_cast<double>(t_len);
    }
    n->pull = [c_len, t_len](Node& self) {
        for (std::size_t c = 0; c < c_len; ++c) {
            const double g = self.grad[c] / static_cast<double>(t_len);
            for (std::size_t t = 0; t < t_len; ++t)
                self.parents[0]->grad[c * t_len + t] += g;
        }
    };
    return Tensor(n);
}

Tensor cosine_sim(const Tensor& a, const Tensor& b) {
    if (a.size() != b.size()) throw NumericError("cosine_sim: dimension mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a.value()[i] * b.value()[i];
        na += a.value()[i] * a.value()[i];
        nb += b.value()[i] * b.value()[i];
    }
    na = std::sqrt(na);
    nb = std::sqrt(nb);
    if (na == 0.0 || nb == 0.0) throw NumericError("cosine_sim: zero-norm input");

    auto n = make_node({1}, {a.node(), b.node()});
    const double sim = dot / (na * nb);
    n->value[0] = sim;
    n->pull = [na, nb, sim](Node& self) {
        auto& pa = *self.parents[0];
        auto& pb = *self.parents[1];
        const double g = self.grad[0];
        for (std::size_t i = 0; i < pa.value.size(); ++i) {
            if (pa.requires_grad)
                pa.grad[i] += g * (pb.value[i] / (na * nb) - sim * pa.value[i] / (na * na));
            if (pb.requires_grad)
                pb.grad[i] += g * (pa.value[i] / (na * nb) - sim * pb.value[i] / (nb * nb));
        }
    };
    return Tensor(n);
}

Tensor dropout(const Tensor& a, double rate, bool train, Rng& rng) {
    if (!train || rate <= 0.0) return a;
    if (rate >= 1.0) throw NumericError("dropout: rate must be < 1");
    const double keep = 1.0 - rate;
    std::vector<double> mask(a.size());
    for (auto& m : mask) m = rng.uniform() < rate ? 0.0 : 1.0 / keep;
    auto n = make_node(a.shape(), {a.node()});
    for (std::size_t i = 0; i < n->size(); ++i) n->value[i] = a.value()[i] * mask[i];
    n->pull = [mask](Node& self) {
        for (std::size_t i = 0; i < self.grad.size(); ++i)
            self.parents[0]->grad[i] += self.grad[i] * mask[i];
    };
    return Tensor(n);
}

void check_finite(const Tensor& t, const std::string& what) {
    for (double v : t.value())
        if (!std::isfinite(v)) throw NumericError("non-finite values in " + what);
}

} // namespace mrlmc::ad
