#include "cerom/snapshots.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "cerom/errors.hpp"

namespace cerom {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 7 * 8;
constexpr std::size_t kTripletBytes = 3 * 8;

void put_u64(std::vector<char> &out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b)
    out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

void put_f64(std::vector<char> &out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
public:
  explicit Reader(const std::vector<char> &buf) : buf_(buf) {}

  std::uint64_t u64(const char *what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + b])) << (8 * b);
    pos_ += 8;
    return v;
  }
  double f64(const char *what) { return std::bit_cast<double>(u64(what)); }
  void need(std::size_t n, const char *what) const {
    if (buf_.size() - pos_ < n)
      throw TruncatedPayloadError(what);
  }
  std::size_t remaining() const { return buf_.size() - pos_; }

private:
  const std::vector<char> &buf_;
  std::size_t pos_ = 4;
};

void put_triplets(std::vector<char> &out, const Eigen::SparseMatrix<double> &m) {
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      put_u64(out, static_cast<std::uint64_t>(it.row()));
      put_u64(out, static_cast<std::uint64_t>(it.col()));
      put_f64(out, it.value());
    }
}

Eigen::SparseMatrix<double> read_triplets(Reader &in, std::uint64_t nnz, std::uint64_t n,
                                          const char *what) {
  if (nnz > in.remaining() / kTripletBytes)
    throw TruncatedPayloadError(what);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(nnz);
  for (std::uint64_t k = 0; k < nnz; ++k) {
    const auto row = in.u64(what);
    const auto col = in.u64(what);
    const double val = in.f64(what);
    if (row >= n || col >= n)
      throw FormatError(std::string("index out of range in ") + what);
    trips.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), val);
  }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

bool symmetric(const Eigen::SparseMatrix<double> &m, double rel_tol) {
  const Eigen::SparseMatrix<double> t = m.transpose();
  const Eigen::SparseMatrix<double> diff = m - t;
  double scale = 0.0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      if (!(std::abs(it.value()) <= rel_tol * scale))
        return false;
  return true;
}

} // namespace

void SnapshotSet::validate(double sym_tol) const {
  if (Y.cols() < 2)
    throw ConfigError("snapshot set needs at least 2 snapshots, got " + std::to_string(Y.cols()));
  if (Y.rows() < 1)
    throw ConfigError("snapshot set has no degrees of freedom");
  const Eigen::Index n = Y.rows();
  if (mass.rows() != n || mass.cols() != n)
    throw ConfigError("mass matrix dimension does not match snapshots");
  if (stiffness.rows() != n || stiffness.cols() != n)
    throw ConfigError("stiffness matrix dimension does not match snapshots");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ConfigError("snapshot dt must be positive");
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != Y.cols())
    throw ConfigError("label count does not match snapshot count");
  if (!symmetric(mass, sym_tol))
    throw SymmetryError("mass matrix");
  if (!symmetric(stiffness, sym_tol))
    throw SymmetryError("stiffness matrix");
}

std::uintmax_t snapshot_file_size(const SnapshotSet &set) {
  return kHeaderBytes +
         kTripletBytes * static_cast<std::uintmax_t>(set.mass.nonZeros() + set.stiffness.nonZeros()) +
         8u * static_cast<std::uintmax_t>(set.Y.size());
}

void save_snapshots(const SnapshotSet &set, const std::filesystem::path &path) {
  set.validate();
  std::vector<char> out;
  out.reserve(snapshot_file_size(set));
  out.insert(out.end(), std::begin(kSnapshotMagic), std::end(kSnapshotMagic));
  put_u64(out, kSnapshotVersion);
  put_u64(out, static_cast<std::uint64_t>(set.Y.rows()));
  put_u64(out, static_cast<std::uint64_t>(set.Y.cols()));
  put_f64(out, set.dt);
  put_f64(out, set.t0);
  put_u64(out, static_cast<std::uint64_t>(set.mass.nonZeros()));
  put_u64(out, static_cast<std::uint64_t>(set.stiffness.nonZeros()));
  put_triplets(out, set.mass);
  put_triplets(out, set.stiffness);
  for (Eigen::Index j = 0; j < set.Y.cols(); ++j)
    for (Eigen::Index i = 0; i < set.Y.rows(); ++i)
      put_f64(out, set.Y(i, j));

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw FormatError("cannot open '" + path.string() + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f)
    throw FormatError("write failed for '" + path.string() + "'");
}

SnapshotSet load_snapshots(const std::filesystem::path &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw FormatError("cannot open '" + path.string() + "'");
  const std::vector<char> buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

  if (buf.size() < 4 || std::memcmp(buf.data(), kSnapshotMagic, 4) != 0)
    throw BadMagicError();
  Reader in(buf);
  const auto version = in.u64("version");
  if (version != kSnapshotVersion)
    throw VersionMismatchError(version);
  const auto n = in.u64("N_h");
  const auto m = in.u64("M");
  SnapshotSet set;
  set.dt = in.f64("dt");
  set.t0 = in.f64("t0");
  const auto nnz_mass = in.u64("nnz_mass");
  const auto nnz_stiff = in.u64("nnz_stiff");
  set.mass = read_triplets(in, nnz_mass, n, "mass triplets");
  set.stiffness = read_triplets(in, nnz_stiff, n, "stiffness triplets");

  if (n != 0 && m > in.remaining() / 8 / n)
    throw TruncatedPayloadError("snapshot matrix");
  set.Y.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (Eigen::Index j = 0; j < set.Y.cols(); ++j)
    for (Eigen::Index i = 0; i < set.Y.rows(); ++i)
      set.Y(i, j) = in.f64("snapshot matrix");
  if (in.remaining() != 0)
    throw FormatError("trailing bytes after snapshot matrix");

  set.validate();
  return set;
}

} // namespace cerom
