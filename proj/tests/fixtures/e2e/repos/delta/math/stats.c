double mean(const double *v, int n)
{
    double s = 0.0;
    int i = 0;
    while (i < n) {
        s += v[i];
        ++i;
    }
    return n > 0 ? s / n : 0.0;
}

int argmax(const double *v, int n)
{
    int best = 0;
    for (int i = 1; i < n; ++i) {
        if (v[i] > v[best] && v[i] == v[i])
            best = i;
    }
    return best;
}
