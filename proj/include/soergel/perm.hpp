// Permutations in the symmetric group S_n, acting on {1,...,n}.
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace soergel {

class Permutation {
 public:
  Permutation() = default;
  // img[i] is the image of i+1 (1-based values).
  explicit Permutation(std::vector<int> img) : img_(std::move(img)) {
    std::vector<bool> seen(img_.size(), false);
    for (int v : img_) {
      if (v < 1 || v > static_cast<int>(img_.size()) || seen[v - 1])
        throw std::invalid_argument("Permutation: not a bijection");
      seen[v - 1] = true;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> img(n);
    for (int i = 0; i < n; ++i) img[i] = i + 1;
    return Permutation(img);
  }
  // The simple transposition s_i = (i, i+1), 1 <= i <= n-1.
  static Permutation simple(int n, int i) {
    Permutation p = identity(n);
    std::swap(p.img_[i - 1], p.img_[i]);
    return p;
  }

  int n() const { return static_cast<int>(img_.size()); }
  int operator()(int i) const { return img_[i - 1]; }

  // Composition: (a*b)(i) = a(b(i)).
  Permutation operator*(const Permutation& o) const {
    std::vector<int> img(img_.size());
    for (size_t i = 0; i < img_.size(); ++i) img[i] = img_[o.img_[i] - 1];
    return Permutation(img);
  }
  Permutation inverse() const {
    std::vector<int> img(img_.size());
    for (size_t i = 0; i < img_.size(); ++i) img[img_[i] - 1] = i + 1;
    return Permutation(img);
  }

  // Coxeter length = inversion count.
  int length() const {
    int l = 0;
    for (size_t i = 0; i < img_.size(); ++i)
      for (size_t j = i + 1; j < img_.size(); ++j)
        if (img_[i] > img_[j]) ++l;
    return l;
  }

  bool is_identity() const {
    for (size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != static_cast<int>(i) + 1) return false;
    return true;
  }

  bool operator==(const Permutation& o) const { return img_ == o.img_; }
  bool operator!=(const Permutation& o) const { return img_ != o.img_; }
  bool operator<(const Permutation& o) const { return img_ < o.img_; }

  // Some reduced word for this permutation (bubble-sort descent picking).
  std::vector<int> reduced_word() const {
    std::vector<int> word;
    std::vector<int> img = img_;
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i + 1 < img.size(); ++i) {
        if (img[i] > img[i + 1]) {
          std::swap(img[i], img[i + 1]);
          word.push_back(static_cast<int>(i) + 1);
          changed = true;
        }
      }
    }
    // word applied on the right in reverse order recovers the permutation;
    // reverse to get w = s_{i1} ... s_{ik}.
    std::reverse(word.begin(), word.end());
    return word;
  }

  const std::vector<int>& images() const { return img_; }

  std::string str() const {
    std::string s = "[";
    for (size_t i = 0; i < img_.size(); ++i) {
      if (i) s += " ";
      s += std::to_string(img_[i]);
    }
    return s + "]";
  }

 private:
  std::vector<int> img_;
};

// All elements of S_n in a deterministic order (lexicographic by images).
std::vector<Permutation> symmetric_group(int n);

}  // namespace soergel
