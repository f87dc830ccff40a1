float sum_float(float* x, int n)
{
  return sum<float>(x, n);
}
