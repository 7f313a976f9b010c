#include <algorithm>
#include <vector>

int count_big(const std::vector<int>& v, int limit)
{
    auto big = [limit](int x) {
        if (x > limit) return true;
        return false;
    };
    return static_cast<int>(std::count_if(v.begin(), v.end(), big));
}
