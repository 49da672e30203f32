#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "krondet/errors.hpp"

namespace krondet {

// Parity of a sequence of distinct images: +1 for an even number of
// inversions, -1 for odd.
inline int sign_of_images(const std::vector<int>& images) {
  int inversions = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      if (images[i] > images[j]) ++inversions;
    }
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

// A permutation of {0, ..., n-1} with its sign cached at construction.
class Permutation {
 public:
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    const int n = static_cast<int>(images_.size());
    if (n == 0) throw shape_error("empty permutation");
    std::vector<bool> seen(images_.size(), false);
    for (int v : images_) {
      if (v < 0 || v >= n || seen[v]) {
        throw validation_error("images do not form a bijection");
      }
      seen[v] = true;
    }
    sign_ = sign_of_images(images_);
  }

  static Permutation identity(int n) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
  }

  int degree() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const {
    if (i < 0 || i >= degree()) {
      throw bounds_error("permutation argument out of range");
    }
    return images_[i];
  }
  int sign() const { return sign_; }
  const std::vector<int>& images() const { return images_; }

  // (this o other)(i) = this(other(i))
  Permutation compose(const Permutation& other) const {
    if (degree() != other.degree()) {
      throw shape_error("composing permutations of different degree");
    }
    std::vector<int> im(images_.size());
    for (int i = 0; i < degree(); ++i) im[i] = images_[other.images_[i]];
    return Permutation(std::move(im));
  }

  std::string describe() const {
    std::string s = "(";
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(images_[i]);
    }
    return s + ")";
  }

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> images_;
  int sign_ = 1;
};

// All elements of S_n in lexicographic order of their image sequences,
// starting at the identity.
inline std::vector<Permutation> all_permutations(int n) {
  if (n < 1) throw shape_error("permutation degree must be positive");
  std::vector<int> im(n);
  std::iota(im.begin(), im.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(im);
  } while (std::next_permutation(im.begin(), im.end()));
  return out;
}

inline std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

// An element (gamma^1, ..., gamma^F) of (S_N)^F; component f assigns summand
// indices to the columns of block-column f.
struct PermutationTuple {
  int n = 0;
  int f = 0;
  std::vector<Permutation> gammas;

  PermutationTuple(int n_, int f_, std::vector<Permutation> gammas_)
      : n(n_), f(f_), gammas(std::move(gammas_)) {
    if (n < 1 || f < 1) throw shape_error("tuple sizes must be positive");
    if (gammas.size() != static_cast<std::size_t>(f)) {
      throw shape_error("tuple needs exactly F component permutations");
    }
    for (const Permutation& g : gammas) {
      if (g.degree() != n) {
        throw shape_error("component permutation degree mismatch");
      }
    }
  }

  static PermutationTuple all_identity(int n, int f) {
    return PermutationTuple(
        n, f, std::vector<Permutation>(f, Permutation::identity(n)));
  }

  std::string describe() const {
    std::string s;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      if (i) s += ' ';
      s += gammas[i].describe();
    }
    return s;
  }

  bool operator==(const PermutationTuple&) const = default;
};

}  // namespace krondet
