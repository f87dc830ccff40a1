double sum_double(double* x, int n)
{
  return sum(x, n);
}
