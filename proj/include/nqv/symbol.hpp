#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace nqv {

/**
 * Interned function or predicate name. Two symbols are equal iff their
 * names are equal; comparison is pointer comparison on the interned string.
 */
class Symbol {
public:
    Symbol() = default;
    explicit Symbol(std::string_view name);

    const std::string& name() const { return *name_; }
    bool valid() const { return name_ != nullptr; }

    friend bool operator==(Symbol a, Symbol b) { return a.name_ == b.name_; }

    /// Orders by name, which is the deterministic order used for enumeration.
    friend std::strong_ordering operator<=>(Symbol a, Symbol b) {
        if (a.name_ == b.name_) return std::strong_ordering::equal;
        return a.name() < b.name() ? std::strong_ordering::less : std::strong_ordering::greater;
    }

    std::size_t hash() const { return std::hash<const void*>{}(name_); }

private:
    const std::string* name_ = nullptr;
};

namespace sym {
// Built-in symbols of the list/numeral language.
Symbol zero();
Symbol succ();
Symbol nil();
Symbol cons();
}  // namespace sym

}  // namespace nqv

template <>
struct std::hash<nqv::Symbol> {
    std::size_t operator()(nqv::Symbol s) const noexcept { return s.hash(); }
};
