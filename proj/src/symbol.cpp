#include "nqv/symbol.hpp"

#include <mutex>
#include <unordered_set>

namespace nqv {

namespace {

struct Interner {
    std::mutex mutex;
    std::unordered_set<std::string> names;  // node-based: element addresses are stable
};

Interner& interner() {
    static Interner instance;
    return instance;
}

}  // namespace

Symbol::Symbol(std::string_view name) {
    Interner& in = interner();
    std::lock_guard<std::mutex> lock(in.mutex);
    name_ = &*in.names.emplace(name).first;
}

namespace sym {
Symbol zero() { static const Symbol s{"0"}; return s; }
Symbol succ() { static const Symbol s{"s"}; return s; }
Symbol nil() { static const Symbol s{"nil"}; return s; }
Symbol cons() { static const Symbol s{"cons"}; return s; }
}  // namespace sym

}  // namespace nqv
