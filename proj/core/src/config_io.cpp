#include "cfmimo/config_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

namespace cfmimo {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value)
{
    throw std::invalid_argument("invalid value '" + value + "' for key '" + key + "'");
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    bad_value(key, value);
}

using Setter = std::function<void(SystemConfig&, const std::string&, const std::string&)>;

template <class T>
Setter int_field(T SystemConfig::*field)
{
    return [field](SystemConfig& c, const std::string& k, const std::string& v) { c.*field = parse_int(k, v); };
}

Setter double_field(double SystemConfig::*field)
{
    return [field](SystemConfig& c, const std::string& k, const std::string& v) { c.*field = parse_double(k, v); };
}

Setter loss_field(double PathLossParams::*field)
{
    return [field](SystemConfig& c, const std::string& k, const std::string& v) {
        c.path_loss.*field = parse_double(k, v);
    };
}

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"M", int_field(&SystemConfig::M)},
        {"N", int_field(&SystemConfig::N)},
        {"K", int_field(&SystemConfig::K)},
        {"tau", int_field(&SystemConfig::tau)},
        {"tau_c", int_field(&SystemConfig::tau_c)},
        {"D", double_field(&SystemConfig::D)},
        {"pbar_p", double_field(&SystemConfig::pbar_p)},
        {"rhobar", double_field(&SystemConfig::rhobar)},
        {"p_n", double_field(&SystemConfig::p_n)},
        {"w_y", double_field(&SystemConfig::w_y)},
        {"w_g", double_field(&SystemConfig::w_g)},
        {"w_z", double_field(&SystemConfig::w_z)},
        {"alpha1", int_field(&SystemConfig::alpha1)},
        {"alpha2", int_field(&SystemConfig::alpha2)},
        {"C_bh", double_field(&SystemConfig::C_bh)},
        {"T_c", double_field(&SystemConfig::T_c)},
        {"epsilon", double_field(&SystemConfig::epsilon)},
        {"max_iters", int_field(&SystemConfig::max_iters)},
        {"pmax", double_field(&SystemConfig::pmax)},
        {"loss_db", loss_field(&PathLossParams::loss_db)},
        {"d0_m", loss_field(&PathLossParams::d0_m)},
        {"d1_m", loss_field(&PathLossParams::d1_m)},
        {"sigma_sh_db", loss_field(&PathLossParams::sigma_sh_db)},
        {"pilot_mode",
         [](SystemConfig& c, const std::string& k, const std::string& v) {
             if (v == "orthogonal")
                 c.pilot_mode = PilotMode::orthogonal;
             else if (v == "random")
                 c.pilot_mode = PilotMode::random;
             else
                 bad_value(k, v);
         }},
        {"rate_overhead",
         [](SystemConfig& c, const std::string& k, const std::string& v) { c.rate_overhead = parse_bool(k, v); }},
    };
    return table;
}

}  // namespace

int parse_int(const std::string& key, const std::string& value)
{
    int out = 0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end || value.empty())
        bad_value(key, value);
    return out;
}

double parse_double(const std::string& key, const std::string& value)
{
    double out = 0.0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end || value.empty())
        bad_value(key, value);
    return out;
}

Setting split_setting(const std::string& text)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("expected key=value, got '" + text + "'");
    Setting s{trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
    if (s.first.empty())
        throw std::invalid_argument("empty key in '" + text + "'");
    return s;
}

std::vector<Setting> parse_settings(std::istream& in)
{
    std::vector<Setting> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        try {
            out.push_back(split_setting(line));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(number) + ": " + e.what());
        }
    }
    return out;
}

std::vector<Setting> read_settings_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file '" + path + "'");
    return parse_settings(in);
}

bool is_config_key(const std::string& key) { return setters().count(key) != 0; }

void apply_setting(SystemConfig& config, const std::string& key, const std::string& value)
{
    const auto it = setters().find(key);
    if (it == setters().end())
        throw std::invalid_argument("unknown setting '" + key + "'");
    it->second(config, key, value);
}

void apply_settings(SystemConfig& config, const std::vector<Setting>& settings)
{
    for (const auto& [key, value] : settings)
        apply_setting(config, key, value);
}

}  // namespace cfmimo
