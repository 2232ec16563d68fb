#include "mixflow/architecture.hpp"

namespace mixflow {

std::string to_string(MixerTechnology tech) {
    switch (tech) {
        case MixerTechnology::Fixed1to1: return "fixed_1to1";
        case MixerTechnology::ArbitraryRatio: return "arbitrary_ratio";
    }
    return "unknown";
}

MixerTechnology mixer_technology_from_string(const std::string& s) {
    if (s == "fixed_1to1" || s == "fixed" || s == "1:1") return MixerTechnology::Fixed1to1;
    if (s == "arbitrary_ratio" || s == "arbitrary") return MixerTechnology::ArbitraryRatio;
    throw ParseError("unknown mixer technology '" + s + "'");
}

const FfuClass* ArchitectureSpec::find_class(const std::string& name) const {
    for (const auto& cls : ffu_classes) {
        if (cls.name == name) return &cls;
    }
    return nullptr;
}

const FfuClass& ArchitectureSpec::require_class(const std::string& name) const {
    const FfuClass* cls = find_class(name);
    if (!cls) throw std::out_of_range("unknown FFU class '" + name + "'");
    return *cls;
}

Volume ArchitectureSpec::chamber_volume(const FfuClass& cls) const {
    return cls.mhc.scaled(Rational(1, cls.chamber_count));
}

} // namespace mixflow
