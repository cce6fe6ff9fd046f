#include "spinres/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace spinres {
namespace {

std::mutex& handler_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& handler_slot() {
    static WarningHandler h = [](const std::string& msg) {
        std::cerr << "spinres: warning: " << msg << '\n';
    };
    return h;
}

}  // namespace

void warn(const std::string& message) {
    std::lock_guard lock(handler_mutex());
    if (auto& h = handler_slot()) h(message);
}

WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(handler_mutex());
    auto previous = std::move(handler_slot());
    handler_slot() = std::move(handler);
    return previous;
}

}  // namespace spinres
