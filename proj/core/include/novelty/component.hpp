#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace novelty {

// The four textual parts of a proposal. Integer codes are persisted in EMB1
// headers and must stay stable.
enum class ComponentTag : std::uint8_t {
    title = 0,
    objectives = 1,
    contents = 2,
    outcomes = 3,
};

inline constexpr std::size_t kComponentCount = 4;

inline constexpr std::array<ComponentTag, kComponentCount> kAllComponents = {
    ComponentTag::title, ComponentTag::objectives, ComponentTag::contents, ComponentTag::outcomes};

constexpr std::size_t index_of(ComponentTag tag) { return static_cast<std::size_t>(tag); }

constexpr std::string_view component_name(ComponentTag tag) {
    switch (tag) {
    case ComponentTag::title: return "title";
    case ComponentTag::objectives: return "objectives";
    case ComponentTag::contents: return "contents";
    case ComponentTag::outcomes: return "outcomes";
    }
    return "unknown";
}

constexpr std::optional<ComponentTag> component_from_code(std::uint8_t code) {
    if (code >= kComponentCount) return std::nullopt;
    return static_cast<ComponentTag>(code);
}

constexpr std::optional<ComponentTag> component_from_name(std::string_view name) {
    for (auto tag : kAllComponents)
        if (component_name(tag) == name) return tag;
    return std::nullopt;
}

} // namespace novelty
