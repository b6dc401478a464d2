package main

func philosopher(table chan int) {
	for {
		<-table
		<-table
		table <- 1
		table <- 1
	}
}

// Both philosophers may grab one fork each and wait forever for a second.
func main() {
	forks := make(chan int)
	go func() {
		forks <- 1
	}()
	go func() {
		forks <- 1
	}()
	go philosopher(forks)
	go philosopher(forks)
	select {}
}
