#pragma once
// Reference MPS contraction. Each site is turned into explicit transfer
// matrices (one per output index at the output site) and the chain is
// multiplied as a product of small matrices, once per output component.

#include <cstddef>
#include <vector>

namespace oracle {

struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<double> v;
  double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
};

inline Mat mul(const Mat& a, const Mat& b) {
  Mat out{a.rows, b.cols, std::vector<double>(a.rows * b.cols)};
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) s += a.at(i, k) * b.at(k, j);
      out.at(i, j) = s;
    }
  return out;
}

// params: flat tensors, site 0 (phys, bond), interior (bond, phys, bond),
// output site (bond, phys, out, bond), last (bond, phys). features: (off, on).
inline std::vector<double> mps_contract(const std::vector<double>& params,
                                        const std::vector<std::pair<double, double>>& features,
                                        std::size_t chi, std::size_t out_dim, std::size_t out_site) {
  const std::size_t n = features.size();
  std::vector<double> result(out_dim);
  for (std::size_t k = 0; k < out_dim; ++k) {
    std::size_t off = 0;
    Mat acc;
    for (std::size_t s = 0; s < n; ++s) {
      const double f0 = features[s].first, f1 = features[s].second;
      Mat m;
      if (s == 0) {
        m = {1, chi, std::vector<double>(chi)};
        for (std::size_t r = 0; r < chi; ++r) m.at(0, r) = f0 * params[off + r] + f1 * params[off + chi + r];
        off += 2 * chi;
      } else if (s == n - 1) {
        m = {chi, 1, std::vector<double>(chi)};
        for (std::size_t l = 0; l < chi; ++l) m.at(l, 0) = f0 * params[off + l * 2] + f1 * params[off + l * 2 + 1];
        off += 2 * chi;
      } else if (s == out_site) {
        m = {chi, chi, std::vector<double>(chi * chi)};
        for (std::size_t l = 0; l < chi; ++l)
          for (std::size_t r = 0; r < chi; ++r) {
            const std::size_t i0 = ((l * 2 + 0) * out_dim + k) * chi + r;
            const std::size_t i1 = ((l * 2 + 1) * out_dim + k) * chi + r;
            m.at(l, r) = f0 * params[off + i0] + f1 * params[off + i1];
          }
        off += chi * 2 * out_dim * chi;
      } else {
        m = {chi, chi, std::vector<double>(chi * chi)};
        for (std::size_t l = 0; l < chi; ++l)
          for (std::size_t r = 0; r < chi; ++r)
            m.at(l, r) = f0 * params[off + (l * 2) * chi + r] + f1 * params[off + (l * 2 + 1) * chi + r];
        off += 2 * chi * chi;
      }
      acc = s == 0 ? m : mul(acc, m);
    }
    result[k] = acc.at(0, 0);
  }
  return result;
}

// 2*chi + (n-3)*2*chi^2 + 2*chi*out*chi + 2*chi
inline std::size_t mps_param_count(std::size_t n, std::size_t chi, std::size_t out_dim) {
  return 2 * chi + (n - 3) * 2 * chi * chi + 2 * chi * out_dim * chi + 2 * chi;
}

}  // namespace oracle
