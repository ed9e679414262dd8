#include "zkit/pairing/backend.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "zkit/pairing/curve.hpp"
#include "zkit/pairing/transparent.hpp"

namespace zkit::pairing {

std::string_view backend_kind_name(BackendKind kind) {
  return kind == BackendKind::kTransparent ? "transparent" : "curve";
}

BackendKind parse_backend_kind(std::string_view name) {
  if (name == "transparent") return BackendKind::kTransparent;
  if (name == "curve") return BackendKind::kCurve;
  throw Error(Errc::kFormatError, "unknown backend '" + std::string(name) + "'");
}

bool GroupElement::is_identity() const { return backend_->is_identity(*this); }

GroupElement GroupElement::operator+(const GroupElement& o) const {
  backend_->check_mine(o);
  return backend_->add(*this, o);
}

GroupElement GroupElement::operator-(const GroupElement& o) const {
  backend_->check_mine(o);
  return backend_->add(*this, backend_->negate(o));
}

GroupElement GroupElement::operator-() const { return backend_->negate(*this); }

GroupElement GroupElement::operator*(const FieldElement& k) const {
  if (&k.field() != &backend_->scalar_field()) {
    throw Error(Errc::kModulusMismatch, "scalar is not in the group's scalar field");
  }
  return backend_->scalar_mul(*this, k);
}

std::string GroupElement::to_text() const { return backend_->to_text(*this); }

TargetElement TargetElement::operator*(const TargetElement& o) const {
  backend_->check_mine(o);
  return backend_->target_mul(*this, o);
}

TargetElement TargetElement::pow(const FieldElement& k) const {
  if (&k.field() != &backend_->scalar_field()) {
    throw Error(Errc::kModulusMismatch, "exponent is not in the group's scalar field");
  }
  return backend_->target_pow(*this, k);
}

bool TargetElement::is_one() const { return *this == backend_->target_identity(); }

GroupElement Backend::identity() const { return identity_element(); }

GroupElement Backend::generator() const { return generator_element(); }

GroupElement Backend::encode(const FieldElement& a) const {
  return encode_batch(std::span<const FieldElement>(&a, 1)).front();
}

std::vector<GroupElement> Backend::encode_batch(std::span<const FieldElement> as) const {
  std::vector<GroupElement> out;
  out.reserve(as.size());
  GroupElement g = generator();
  for (const auto& a : as) out.push_back(g * a);
  return out;
}

GroupElement Backend::msm(std::span<const GroupElement> points,
                          std::span<const FieldElement> scalars) const {
  if (points.size() != scalars.size()) {
    throw Error(Errc::kDimensionMismatch, "msm: point and scalar counts differ");
  }
  GroupElement acc = identity();
  for (std::size_t i = 0; i < points.size(); ++i) acc += points[i] * scalars[i];
  return acc;
}

TargetElement Backend::pair(const GroupElement& x, const GroupElement& y) const {
  check_mine(x);
  check_mine(y);
  pairings_.fetch_add(1, std::memory_order_relaxed);
  return do_pair(x, y);
}

TargetElement Backend::target_one() const { return target_identity(); }

void Backend::check_mine(const GroupElement& e) const {
  if (e.backend_ != this) {
    throw Error(Errc::kBackendMismatch, "group element belongs to another backend");
  }
}

void Backend::check_mine(const TargetElement& t) const {
  if (t.backend_ != this) {
    throw Error(Errc::kBackendMismatch, "target element belongs to another backend");
  }
}

const Backend& backend(BackendKind kind, const PrimeField& fr) {
  static std::mutex mu;
  static std::map<std::pair<BackendKind, const PrimeField*>, std::unique_ptr<Backend>> registry;
  std::lock_guard lock(mu);
  auto& slot = registry[{kind, &fr}];
  if (!slot) {
    if (kind == BackendKind::kTransparent) {
      slot.reset(new TransparentBackend(fr));
    } else {
      slot.reset(new CurveBackend(fr));
    }
  }
  return *slot;
}

}  // namespace zkit::pairing
