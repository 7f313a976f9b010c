int classify(int c)
{
    switch (c) {
    case 0:
        return 10;
    case 1:
    case 2:
        return 20;
    default:
        return -1;
    }
}
