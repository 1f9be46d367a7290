#include "stancegraph/tape.hpp"

#include <algorithm>
#include <cmath>

namespace stancegraph {

Csr Csr::from_lists(const std::vector<std::vector<int32_t>>& adj) {
  Csr csr;
  csr.offsets.reserve(adj.size() + 1);
  csr.offsets.push_back(0);
  for (const auto& nbrs : adj) {
    std::vector<int32_t> sorted = nbrs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    csr.nbrs.insert(csr.nbrs.end(), sorted.begin(), sorted.end());
    csr.offsets.push_back(static_cast<int64_t>(csr.nbrs.size()));
  }
  return csr;
}

int Tape::push(Tensor value, std::function<void(Tape&)> back) {
  Node n;
  n.value = std::move(value);
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

int Tape::constant(Tensor value) { return push(std::move(value)); }

int Tape::param(ParamStore& store, const std::string& name) {
  int id = push(store.value(name));
  nodes_.back().store = &store;
  nodes_.back().param_name = name;
  return id;
}

int Tape::matmul(int a, int b) {
  const Tensor& ta = value(a);
  const Tensor& tb = value(b);
  Tensor out = stancegraph::matmul(ta, tb);
  return push(std::move(out), [a, b, this_out = static_cast<int>(nodes_.size())](Tape& t) {
    const Tensor& g = t.grad(this_out);
    const Tensor& ta = t.value(a);
    const Tensor& tb = t.value(b);
    Tensor& ga = t.grad(a);
    Tensor& gb = t.grad(b);
    int64_t m = ta.rows(), k = ta.cols(), n = tb.cols();
    // dA = g . B^T
    for (int64_t i = 0; i < m; ++i) {
      for (int64_t j = 0; j < n; ++j) {
        double gij = g.at(i, j);
        if (gij == 0.0) continue;
        for (int64_t p = 0; p < k; ++p) ga.at(i, p) += gij * tb.at(p, j);
      }
    }
    // dB = A^T . g
    for (int64_t i = 0; i < m; ++i) {
      for (int64_t p = 0; p < k; ++p) {
        double aip = ta.at(i, p);
        if (aip == 0.0) continue;
        for (int64_t j = 0; j < n; ++j) gb.at(p, j) += aip * g.at(i, j);
      }
    }
  });
}

int Tape::add(int a, int b) {
  const Tensor& ta = value(a);
  const Tensor& tb = value(b);
  if (!ta.same_shape(tb)) throw Error(Errc::ShapeMismatch, "add shapes differ");
  Tensor out = ta;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += tb.data[i];
  return push(std::move(out), [a, b, this_out = static_cast<int>(nodes_.size())](Tape& t) {
    const Tensor& g = t.grad(this_out);
    Tensor& ga = t.grad(a);
    Tensor& gb = t.grad(b);
    for (size_t i = 0; i < g.data.size(); ++i) {
      ga.data[i] += g.data[i];
      gb.data[i] += g.data[i];
    }
  });
}

int Tape::add_row_vector(int m, int v) {
  const Tensor& tm = value(m);
  const Tensor& tv = value(v);
  if (tv.shape.size() != 1 || tv.numel() != tm.cols()) {
    throw Error(Errc::ShapeMismatch, "add_row_vector width mismatch");
  }
  Tensor out = tm;
  int64_t cols = tm.cols();
  for (int64_t r = 0; r < tm.rows(); ++r) {
    for (int64_t c = 0; c < cols; ++c) out.at(r, c) += tv.data[static_cast<size_t>(c)];
  }
  return push(std::move(out), [m, v, this_out = static_cast<int>(nodes_.size())](Tape& t) {
    const Tensor& g = t.grad(this_out);
    Tensor& gm = t.grad(m);
    Tensor& gv = t.grad(v);
    int64_t cols = g.cols();
    for (int64_t r = 0; r < g.rows(); ++r) {
      for (int64_t c = 0; c < cols; ++c) {
        gm.at(r, c) += g.at(r, c);
        gv.data[static_cast<size_t>(c)] += g.at(r, c);
      }
    }
  });
}

int Tape::relu(int x) {
  Tensor out = stancegraph::relu(value(x));
  return push(std::move(out), [x, this_out = static_cast<int>(nodes_.size())](Tape& t) {
    const Tensor& g = t.grad(this_out);
    const Tensor& v = t.value(this_out);
    Tensor& gx = t.grad(x);
    for (size_t i = 0; i < g.data.size(); ++i) {
      if (v.data[i] > 0.0) gx.data[i] += g.data[i];
    }
  });
}

int Tape::sigmoid(int x) {
  Tensor out = stancegraph::sigmoid(value(x));
  return push(std::move(out), [x, this_out = static_cast<int>(nodes_.size())](Tape& t) {
    const Tensor& g = t.grad(this_out);
    const Tensor& s = t.value(this_out);
    Tensor& gx = t.grad(x);
    for (size_t i = 0; i < g.data.size(); ++i) {
      gx.data[i] += g.data[i] * s.data[i] * (1.0 - s.data[i]);
    }
  });
}

int Tape::softmax_vector(int x) {
  Tensor out = stancegraph::softmax(value(x));
  return push(std::move(out), [x, this_out = static_cast<int>(nodes_.size())](Tape& t) {
    const Tensor& g = t.grad(this_out);
    const Tensor& s = t.value(this_out);
    Tensor& gx = t.grad(x);
    double dot = 0.0;
    for (size_t i = 0; i < g.data.size(); ++i) dot += g.data[i] * s.data[i];
    for (size_t i = 0; i < g.data.size(); ++i) {
      gx.data[i] += s.data[i] * (g.data[i] - dot);
    }
  });
}

int Tape::gather(int v, const std::vector<int64_t>& indices) {
  const Tensor& tv = value(v);
  if (tv.shape.size() != 1) throw Error(Errc::ShapeMismatch, "gather expects a rank-1 tensor");
  Tensor out = Tensor::zeros({static_cast<int64_t>(indices.size())});
  for (size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] < 0 || indices[j] >= tv.numel()) {
      throw Error(Errc::ShapeMismatch, "gather index out of range");
    }
    out.data[j] = tv.data[static_cast<size_t>(indices[j])];
  }
  return push(std::move(out), [v, indices, this_out = static_cast<int>(nodes_.size())](Tape& t) {
    const Tensor& g = t.grad(this_out);
    Tensor& gv = t.grad(v);
    for (size_t j = 0; j < indices.size(); ++j) {
      gv.data[static_cast<size_t>(indices[j])] += g.data[j];
    }
  });
}

int Tape::neighbor_mean(int h, const Csr* adj) {
  const Tensor& th = value(h);
  if (adj->node_count() != th.rows()) {
    throw Error(Errc::ShapeMismatch, "neighbor_mean adjacency rows != feature rows");
  }
  int64_t cols = th.cols();
  Tensor out = Tensor::zeros(th.shape);
  for (int64_t v = 0; v < adj->node_count(); ++v) {
    int64_t deg = adj->degree(v);
    if (deg == 0) continue;
    double inv = 1.0 / static_cast<double>(deg);
    for (int64_t e = adj->offsets[v]; e < adj->offsets[v + 1]; ++e) {
      int64_t u = adj->nbrs[static_cast<size_t>(e)];
      for (int64_t c = 0; c < cols; ++c) out.at(v, c) += th.at(u, c) * inv;
    }
  }
  return push(std::move(out), [h, adj, this_out = static_cast<int>(nodes_.size())](Tape& t) {
    const Tensor& g = t.grad(this_out);
    Tensor& gh = t.grad(h);
    int64_t cols = g.cols();
    for (int64_t v = 0; v < adj->node_count(); ++v) {
      int64_t deg = adj->degree(v);
      if (deg == 0) continue;
      double inv = 1.0 / static_cast<double>(deg);
      for (int64_t e = adj->offsets[v]; e < adj->offsets[v + 1]; ++e) {
        int64_t u = adj->nbrs[static_cast<size_t>(e)];
        for (int64_t c = 0; c < cols; ++c) gh.at(u, c) += g.at(v, c) * inv;
      }
    }
  });
}

int Tape::scale_by_entry(int h, int w, int64_t index) {
  const Tensor& th = value(h);
  const Tensor& tw = value(w);
  if (tw.shape.size() != 1 || index < 0 || index >= tw.numel()) {
    throw Error(Errc::ShapeMismatch, "scale_by_entry index out of range");
  }
  double s = tw.data[static_cast<size_t>(index)];
  Tensor out = th;
  for (double& v : out.data) v *= s;
  return push(std::move(out), [h, w, index, this_out = static_cast<int>(nodes_.size())](Tape& t) {
    const Tensor& g = t.grad(this_out);
    const Tensor& th = t.value(h);
    double s = t.value(w).data[static_cast<size_t>(index)];
    Tensor& gh = t.grad(h);
    Tensor& gw = t.grad(w);
    double acc = 0.0;
    for (size_t i = 0; i < g.data.size(); ++i) {
      gh.data[i] += g.data[i] * s;
      acc += g.data[i] * th.data[i];
    }
    gw.data[static_cast<size_t>(index)] += acc;
  });
}

int Tape::concat_pairs(int h, const std::vector<std::pair<int32_t, int32_t>>& pairs) {
  const Tensor& th = value(h);
  int64_t d = th.cols();
  Tensor out = Tensor::zeros({static_cast<int64_t>(pairs.size()), 2 * d});
  for (size_t i = 0; i < pairs.size(); ++i) {
    for (int64_t c = 0; c < d; ++c) {
      out.at(static_cast<int64_t>(i), c) = th.at(pairs[i].first, c);
      out.at(static_cast<int64_t>(i), d + c) = th.at(pairs[i].second, c);
    }
  }
  return push(std::move(out), [h, pairs, this_out = static_cast<int>(nodes_.size())](Tape& t) {
    const Tensor& g = t.grad(this_out);
    Tensor& gh = t.grad(h);
    int64_t d = gh.cols();
    for (size_t i = 0; i < pairs.size(); ++i) {
      for (int64_t c = 0; c < d; ++c) {
        gh.at(pairs[i].first, c) += g.at(static_cast<int64_t>(i), c);
        gh.at(pairs[i].second, c) += g.at(static_cast<int64_t>(i), d + c);
      }
    }
  });
}

int Tape::bce_mean(int p, const std::vector<int>& labels) {
  const Tensor& tp = value(p);
  if (tp.numel() != static_cast<int64_t>(labels.size()) || labels.empty()) {
    throw Error(Errc::ShapeMismatch, "bce_mean labels length mismatch");
  }
  double total = 0.0;
  for (size_t i = 0; i < labels.size(); ++i) {
    total += stancegraph::bce_loss(tp.data[i], labels[i]);
  }
  Tensor out({}, {total / static_cast<double>(labels.size())});
  return push(std::move(out), [p, labels, this_out = static_cast<int>(nodes_.size())](Tape& t) {
    double gout = t.grad(this_out).data[0];
    const Tensor& tp = t.value(p);
    Tensor& gp = t.grad(p);
    double inv_n = 1.0 / static_cast<double>(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) {
      if (tp.data[i] < kBceEps || tp.data[i] > 1.0 - kBceEps) continue;  // clamped: flat
      double d = (labels[i] == 1) ? -1.0 / tp.data[i] : 1.0 / (1.0 - tp.data[i]);
      gp.data[i] += gout * d * inv_n;
    }
  });
}

void Tape::backward(int loss) {
  if (nodes_.empty() || loss < 0 || loss >= static_cast<int>(nodes_.size())) {
    throw Error(Errc::NoForwardRecorded, "backward without a recorded forward pass");
  }
  if (node(loss).value.numel() != 1) {
    throw Error(Errc::ShapeMismatch, "backward expects a scalar loss node");
  }
  for (Node& n : nodes_) n.grad = Tensor::zeros(n.value.shape);
  node(loss).grad.data[0] = 1.0;
  for (int id = static_cast<int>(nodes_.size()) - 1; id >= 0; --id) {
    Node& n = node(id);
    bool has_grad = false;
    for (double g : n.grad.data) {
      if (g != 0.0) {
        has_grad = true;
        break;
      }
    }
    if (!has_grad) continue;
    if (n.back) n.back(*this);
    if (n.store) {
      Tensor& dst = n.store->grad(n.param_name);
      for (size_t i = 0; i < dst.data.size(); ++i) dst.data[i] += n.grad.data[i];
    }
  }
}

}  // namespace stancegraph
