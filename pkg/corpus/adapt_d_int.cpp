int sum_int(int* x, int n)
{
  return sum(x, x+n, plus<int>(), 0);
}
